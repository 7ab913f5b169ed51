#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shiftmetric/errors.hpp"
#include "shiftmetric/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace shiftmetric;
using cplx = std::complex<double>;

namespace {

std::mt19937_64& rng() {
    static std::mt19937_64 gen(307);
    return gen;
}

cplx random_cplx(double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    return {dist(rng()), dist(rng())};
}

// Oracle: expand lead * prod (z - c_i) into descending coefficients.
std::vector<cplx> resynthesize(const std::vector<cplx>& roots, double lead) {
    std::vector<cplx> poly = {lead};
    for (const cplx& r : roots) {
        std::vector<cplx> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i] * r;
        }
        poly = std::move(next);
    }
    return poly;
}

// descending coefficients of f' for the oracle comparison
std::vector<cplx> derivative_coeffs(const Polynomial& f) {
    std::vector<cplx> out = {static_cast<double>(f.degree), 0.0};
    for (int i = 0; i + 1 < static_cast<int>(f.coeffs.size()); ++i)
        out.push_back(f.coeffs[i] * static_cast<double>(f.degree - 2 - i));
    return out;
}

} // namespace

TEST_CASE("polynomial evaluation is self-consistent") {
    const Polynomial f(4, {cplx(1.0, 2.0), cplx(-0.5, 0.25), cplx(3.0, -1.0)});
    CHECK(f.eval(0.0) == f.coeffs[2]);
    // f(z) - z^4 at small z reduces to a_2 z^2 + a_1 z + a_0
    const cplx z = 1e-4;
    const cplx rest = f.eval(z) - z * z * z * z;
    const cplx expect = f.coeffs[0] * z * z + f.coeffs[1] * z + f.coeffs[2];
    CHECK(std::abs(rest - expect) < 1e-18);

    CHECK_THROWS_AS(Polynomial(1, {}), DomainError);
    CHECK_THROWS_AS(Polynomial(3, {cplx(1.0, 0.0)}), DomainError);
}

TEST_CASE("critical points of simple cases") {
    // f = z^3 - 3z: f' = 3z^2 - 3, critical points {1, -1}
    const Polynomial f(3, {cplx(-3.0, 0.0), cplx(0.0, 0.0)});
    auto pts = critical_points(f);
    REQUIRE(pts.size() == 2);
    std::sort(pts.begin(), pts.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    CHECK(std::abs(pts[0] - cplx(-1.0, 0.0)) < 1e-10);
    CHECK(std::abs(pts[1] - cplx(1.0, 0.0)) < 1e-10);
}

TEST_CASE("critical points of z^D collapse to zero with multiplicity") {
    for (int D : {3, 5, 8}) {
        const Polynomial f(D, std::vector<cplx>(D - 1, 0.0));
        const auto pts = critical_points(f);
        REQUIRE(static_cast<int>(pts.size()) == D - 1);
        for (const cplx& c : pts)
            CHECK(std::abs(c) < 1e-8);
    }
}

TEST_CASE("random quartic critical points pass the resynthesis oracle") {
    for (int trial = 0; trial < 10; ++trial) {
        const Polynomial f(4, {random_cplx(2.0), random_cplx(2.0), random_cplx(2.0)});
        const auto pts = critical_points(f);
        REQUIRE(pts.size() == 3);
        const auto rebuilt = resynthesize(pts, 4.0);
        const auto expect = derivative_coeffs(f);
        REQUIRE(rebuilt.size() == expect.size());
        double scale = 0.0;
        for (const cplx& c : expect)
            scale = std::max(scale, std::abs(c));
        for (std::size_t i = 0; i < rebuilt.size(); ++i)
            CHECK(std::abs(rebuilt[i] - expect[i]) <= 1e-8 * scale);
    }
}

TEST_CASE("escaping rate of z^D is log+|z|") {
    std::uniform_real_distribution<double> mag(0.2, 3.0);
    std::uniform_real_distribution<double> arg(0.0, 6.28318);
    for (int D : {2, 3, 5}) {
        const Polynomial f(D, std::vector<cplx>(D - 1, 0.0));
        CHECK(green_function(f, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(green_function(f, 0.5) == 0.0);
        CHECK(green_function(f, cplx(0.0, 1.0)) == 0.0);
        for (int i = 0; i < 100; ++i) {
            const double r = mag(rng());
            const cplx z = std::polar(r, arg(rng()));
            const double expect = std::max(0.0, std::log(r));
            CHECK(std::abs(green_function(f, z) - expect) <= 1e-12 * std::max(1.0, expect));
        }
    }
}

TEST_CASE("escaping rate of z^2 + c at the critical point") {
    // functional equation: G(0) = G(c)/2 ~ log|c|/2 for large c
    const double big = 1e6;
    const Polynomial f(2, {cplx(big, 0.0)});
    const double g0 = green_function(f, 0.0, 1e-12);
    CHECK(std::abs(g0 - 0.5 * std::log(big)) < 1e-3);
    const double gc = green_function(f, cplx(big, 0.0), 1e-12);
    CHECK(g0 == doctest::Approx(gc / 2.0).epsilon(1e-12));
}

TEST_CASE("G(f(z)) = D G(z) at escaping points") {
    const Polynomial f(3, {cplx(0.3, 0.1), cplx(2.0, -1.0)});
    std::uniform_real_distribution<double> mag(2.0, 6.0);
    std::uniform_real_distribution<double> arg(0.0, 6.28318);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 100; ++i) {
        const cplx z = std::polar(mag(rng()), arg(rng()));
        const double g = green_function(f, z, 1e-14);
        if (g <= 0.0)
            continue;
        const double gf = green_function(f, f.eval(z), 1e-14);
        CHECK(gf == doctest::Approx(3.0 * g).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("escaping rate is continuous away from the Julia set") {
    const Polynomial f(2, {cplx(2.0, 1.5)});
    std::uniform_real_distribution<double> mag(2.5, 5.0);
    std::uniform_real_distribution<double> arg(0.0, 6.28318);
    for (int i = 0; i < 100; ++i) {
        const cplx z = std::polar(mag(rng()), arg(rng()));
        const cplx dz = std::polar(1e-6, arg(rng()));
        const double g1 = green_function(f, z, 1e-13);
        const double g2 = green_function(f, z + dz, 1e-13);
        CHECK(std::abs(g1 - g2) < 1e-3);
    }
}

TEST_CASE("green rejects NaN input") {
    const Polynomial f(2, {cplx(1.0, 0.0)});
    CHECK_THROWS_AS(green_function(f, cplx(std::nan(""), 0.0)), DomainError);
}

TEST_CASE("critical heights") {
    // z^D has its critical point fixed: all heights vanish
    for (int D : {2, 4}) {
        const Polynomial f(D, std::vector<cplx>(D - 1, 0.0));
        const auto h = critical_heights(f);
        REQUIRE(static_cast<int>(h.h.size()) == D - 1);
        for (double v : h.h)
            CHECK(v == 0.0);
    }

    const Polynomial quad(2, {cplx(1e6, 0.0)});
    const auto h = critical_heights(quad);
    CHECK(std::abs(h[0] - 0.5 * std::log(1e6)) < 1e-3);

    // random cubic with both critical orbits escaping: refined-iteration oracle
    const Polynomial cubic(3, {cplx(0.5, 0.25), cplx(4.0, 3.0)});
    const auto h1 = critical_heights(cubic, 1e-9);
    const auto h2 = critical_heights(cubic, 1e-14);
    REQUIRE(h1.h.size() == 2);
    CHECK(h1[0] >= h1[1]);
    CHECK(h1[1] > 0.0);
    for (int i = 0; i < 2; ++i)
        CHECK(h1[i] == doctest::Approx(h2[i]).epsilon(1e-9));
}

TEST_CASE("heights are stable under critical point enumeration order") {
    const Polynomial f(4, {cplx(1.0, 1.0), cplx(-2.0, 0.5), cplx(3.0, -2.0)});
    auto pts = critical_points(f);
    std::vector<double> direct;
    for (const cplx& c : pts)
        direct.push_back(green_function(f, c, 1e-12));
    std::sort(direct.begin(), direct.end(), std::greater<>());

    std::shuffle(pts.begin(), pts.end(), rng());
    std::vector<double> shuffled;
    for (const cplx& c : pts)
        shuffled.push_back(green_function(f, c, 1e-12));
    std::sort(shuffled.begin(), shuffled.end(), std::greater<>());
    CHECK(direct == shuffled);
}

TEST_CASE("shift locus test") {
    CHECK(is_shift_locus(CriticalHeights({6.9})));
    CHECK_FALSE(is_shift_locus(CriticalHeights({0.0, 0.0})));
    CHECK_FALSE(is_shift_locus(CriticalHeights({1.0, 1e-15})));
}

TEST_CASE("genericity test") {
    CHECK_FALSE(is_generic(CriticalHeights({1.0, 0.5}), 2)); // ratio 2 = D^1
    CHECK(is_generic(CriticalHeights({1.0, 0.3}), 2));
    CHECK_FALSE(is_generic(CriticalHeights({1.0, 1.0, 0.0}), 3)); // zero entry
    CHECK_FALSE(is_generic(CriticalHeights({2.0, 2.0}), 3));      // ratio D^0
}

TEST_CASE("subannuli of the fundamental annulus") {
    const double twoPi = 2.0 * 3.14159265358979324;
    // D = 2: a single subannulus of modulus h1/(2 pi)
    const auto one = subannuli(CriticalHeights({1.7}));
    CHECK(one.classCount == 1);
    CHECK(one.moduli[0] == doctest::Approx(1.7 / twoPi));

    // D = 3, h = (2, 1): the representative of h2 inside [2, 6) is 3
    const auto two = subannuli(CriticalHeights({2.0, 1.0}));
    REQUIRE(two.classCount == 2);
    CHECK(two.boundaries[0] == doctest::Approx(2.0));
    CHECK(two.boundaries[1] == doctest::Approx(3.0));
    CHECK(two.boundaries[2] == doctest::Approx(6.0));
    CHECK(two.moduli[0] == doctest::Approx(1.0 / twoPi));
    CHECK(two.moduli[1] == doctest::Approx(3.0 / twoPi));

    // equal heights merge into one foliated class
    const auto merged = subannuli(CriticalHeights({2.0, 2.0}));
    CHECK(merged.classCount == 1);
    CHECK(merged.moduli[0] == doctest::Approx(4.0 / twoPi));

    CHECK_THROWS_AS(subannuli(CriticalHeights({1.0, 0.0})), DomainError);
}

TEST_CASE("subannuli moduli sum to (D-1) h1 / (2 pi)") {
    std::uniform_real_distribution<double> dist(0.05, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int D = 2 + trial % 5;
        std::vector<double> h(D - 1);
        for (double& v : h)
            v = dist(rng());
        std::sort(h.begin(), h.end(), std::greater<>());
        const auto dec = subannuli(CriticalHeights(h));
        CHECK(dec.classCount <= D - 1);
        double sum = 0.0;
        for (double mj : dec.moduli)
            sum += mj;
        const double expect = (D - 1) * h[0] / (2.0 * 3.14159265358979324);
        CHECK(sum == doctest::Approx(expect).epsilon(1e-12));
    }
}
