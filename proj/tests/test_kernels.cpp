#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shiftmetric/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace k = shiftmetric::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (double& x : v)
        x = dist(rng);
    return v;
}

} // namespace

TEST_CASE("vectorized exp matches libm") {
    if (!k::avx2_available())
        return; // scalar-only host; the dispatcher already falls back
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-708.0, 709.0);
    std::vector<double> x(4096);
    for (double& v : x)
        v = dist(rng);
    x[0] = 0.0;
    x[1] = -0.0;
    x[2] = 1.0;
    x[3] = -745.0; // below-normal results flush to zero
    x[4] = -1e9;
    x[5] = 709.08;

    std::vector<double> out(x.size());
    // exp_neg computes exp(-scale*x); use scale = -1 to get exp(x)
    k::avx2().exp_neg(x.data(), x.size(), -1.0, out.data());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ref = std::exp(x[i]);
        if (ref < 1e-300) {
            CHECK(out[i] <= 1e-300);
        } else {
            CHECK(out[i] == doctest::Approx(ref).epsilon(5e-15));
        }
    }
}

TEST_CASE("scalar and avx2 kernels agree") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {std::size_t(1), std::size_t(3), std::size_t(4),
                          std::size_t(17), std::size_t(1000), std::size_t(65537)}) {
        auto w = random_vec(rng, n, -2.0, 2.0);
        auto x = random_vec(rng, n, 0.0, 50.0);
        auto q = random_vec(rng, n, -3.0, 3.0);
        const double scale = 0.7;

        const auto s = k::scalar().exp_weighted_sums(w.data(), x.data(), n, scale);
        const auto v = k::avx2().exp_weighted_sums(w.data(), x.data(), n, scale);
        double absScale = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            absScale += std::abs(w[i]) * std::exp(-scale * x[i]) * (1.0 + x[i]);
        CHECK(std::abs(s.s0 - v.s0) <= 1e-13 * absScale + 1e-300);
        CHECK(std::abs(s.s1 - v.s1) <= 1e-13 * absScale + 1e-300);

        const double qs = k::scalar().exp_quad_sum(w.data(), q.data(), x.data(), n, scale);
        const double qv = k::avx2().exp_quad_sum(w.data(), q.data(), x.data(), n, scale);
        CHECK(std::abs(qs - qv) <= 1e-12 * (std::abs(qs) + absScale) + 1e-300);

        const double ds = k::scalar().dot(w.data(), q.data(), n);
        const double dv = k::avx2().dot(w.data(), q.data(), n);
        CHECK(ds == doctest::Approx(dv).epsilon(1e-12));
    }
}

TEST_CASE("matvec variants agree") {
    std::mt19937_64 rng(13);
    for (std::size_t rows : {std::size_t(1), std::size_t(5), std::size_t(33)}) {
        for (std::size_t cols : {std::size_t(1), std::size_t(4), std::size_t(19)}) {
            auto M = random_vec(rng, rows * cols, -1.0, 1.0);
            auto x = random_vec(rng, cols, -1.0, 1.0);
            std::vector<double> ys(rows), yv(rows);
            k::scalar().matvec(M.data(), x.data(), ys.data(), rows, cols);
            k::avx2().matvec(M.data(), x.data(), yv.data(), rows, cols);
            for (std::size_t r = 0; r < rows; ++r)
                CHECK(ys[r] == doctest::Approx(yv[r]).epsilon(1e-13));
        }
    }
}

TEST_CASE("active kernel set is one of the known sets") {
    const char* name = k::active().name;
    CHECK((std::string(name) == "scalar" || std::string(name) == "avx2"));
}
