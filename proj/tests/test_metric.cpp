#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shiftmetric/entropy.hpp"
#include "shiftmetric/errors.hpp"
#include "shiftmetric/metric.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace shiftmetric;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::mt19937_64& rng() {
    static std::mt19937_64 gen(202);
    return gen;
}

std::vector<double> random_lengths(int n, double logLo = -1.0, double logHi = 1.0) {
    std::uniform_real_distribution<double> dist(logLo, logHi);
    std::vector<double> l(n);
    for (double& v : l)
        v = std::exp(dist(rng()));
    return l;
}

std::vector<double> random_tangent(const LengthFunction& lhat) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> w(lhat.n());
    for (double& x : w)
        x = dist(rng());
    return project_tangent(lhat, w);
}

// Independent oracle: second directional difference of the entropy function.
double entropy_hessian_fd(const LengthFunction& lhat, const std::vector<double>& v) {
    const double eps = 1e-3;
    auto at = [&](double s) {
        std::vector<double> l = lhat.values();
        for (int j = 0; j < lhat.n(); ++j)
            l[j] += s * v[j];
        return entropy(LengthFunction(lhat.graphPtr(), std::move(l)));
    };
    return (16.0 * (at(eps) + at(-eps)) - (at(2 * eps) + at(-2 * eps)) - 30.0 * at(0.0)) /
           (12.0 * eps * eps);
}

PathSpec linear_rose_path(std::shared_ptr<const MetricGraph> graph,
                          std::vector<double> from, std::vector<double> to,
                          double t0 = 0.0, double t1 = 1.0) {
    PathSpec path;
    path.graph = std::move(graph);
    PathPiece piece;
    piece.t0 = t0;
    piece.t1 = t1;
    piece.lengths = [from, to, t0, t1](double t) {
        const double s = (t - t0) / (t1 - t0);
        std::vector<double> l(from.size());
        for (std::size_t j = 0; j < from.size(); ++j)
            l[j] = (1.0 - s) * from[j] + s * to[j];
        return l;
    };
    piece.derivative = [from, to, t0, t1](double) {
        std::vector<double> d(from.size());
        for (std::size_t j = 0; j < from.size(); ++j)
            d[j] = (to[j] - from[j]) / (t1 - t0);
        return d;
    };
    path.pieces.push_back(std::move(piece));
    return path;
}

} // namespace

TEST_CASE("norm is positive on random tangent vectors") {
    for (int trial = 0; trial < 100; ++trial) {
        const auto lhat = normalize_unit_entropy(rose_lengths(random_lengths(4)));
        const auto v = random_tangent(lhat);
        double vnorm = 0.0;
        for (double x : v)
            vnorm += x * x;
        if (vnorm < 1e-12)
            continue;
        CHECK(entropy_norm_sq(lhat, v) > 0.0);
    }
}

TEST_CASE("ratio formula matches the entropy Hessian") {
    for (int n : {2, 3, 4}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto lhat = normalize_unit_entropy(rose_lengths(random_lengths(n)));
            const auto v = random_tangent(lhat);
            const double viaF = entropy_norm_sq(lhat, v);
            const double viaH = entropy_hessian_fd(lhat, v);
            CHECK(viaF == doctest::Approx(viaH).epsilon(1e-5));
        }
    }
}

TEST_CASE("norm satisfies the quadratic-form laws") {
    const auto lhat = normalize_unit_entropy(rose_lengths(random_lengths(4)));
    const auto u = random_tangent(lhat);
    const auto v = random_tangent(lhat);
    const double nu = entropy_norm_sq(lhat, u);
    const double nv = entropy_norm_sq(lhat, v);

    for (double a : {0.5, 2.0, -3.0}) {
        std::vector<double> av(u.size());
        for (std::size_t j = 0; j < u.size(); ++j)
            av[j] = a * u[j];
        CHECK(entropy_norm_sq(lhat, av) == doctest::Approx(a * a * nu).epsilon(1e-9));
    }

    std::vector<double> sum(u.size()), diff(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        sum[j] = u[j] + v[j];
        diff[j] = u[j] - v[j];
    }
    const double lhs = entropy_norm_sq(lhat, sum) + entropy_norm_sq(lhat, diff);
    CHECK(lhs == doctest::Approx(2.0 * nu + 2.0 * nv).epsilon(1e-9));
}

TEST_CASE("tangent vector validation") {
    const auto lhat = normalize_unit_entropy(rose_lengths({1.0, 2.0, 0.7, 1.3}));
    const auto v = random_tangent(lhat);
    CHECK_NOTHROW(TangentVector(lhat, v));
    CHECK(std::abs(tangency_defect(lhat, v)) < 1e-9);
    // a blatantly non-tangent vector is rejected
    CHECK_THROWS_AS(TangentVector(lhat, std::vector<double>(4, 1.0)), DomainError);
    // non-normalized basepoint is rejected
    CHECK_THROWS_AS(TangentVector(rose_lengths({1.0, 2.0, 0.7, 1.3}), v), DomainError);
}

TEST_CASE("constant paths have zero length") {
    const auto l = random_lengths(3);
    const auto path = linear_rose_path(rose_graph(3), l, l);
    CHECK(path_length(path) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("path length is reversal invariant") {
    const auto path = linear_rose_path(rose_graph(3), {1.0, 2.0, 0.5}, {1.5, 1.0, 0.8});
    const double fwd = path_length(path);
    const double bwd = path_length(path.reversed());
    CHECK(fwd > 0.0);
    CHECK(fwd == doctest::Approx(bwd).epsilon(1e-12));
}

TEST_CASE("path length adds over concatenation") {
    const std::vector<double> a = {1.0, 2.0, 0.5};
    const std::vector<double> mid = {1.2, 1.4, 0.9};
    const std::vector<double> b = {1.5, 1.0, 0.8};

    const double one = path_length(linear_rose_path(rose_graph(3), a, mid));
    const double two = path_length(linear_rose_path(rose_graph(3), mid, b));

    PathSpec joined;
    joined.graph = rose_graph(3);
    joined.pieces.push_back(linear_rose_path(rose_graph(3), a, mid, 0.0, 0.5).pieces[0]);
    joined.pieces.push_back(linear_rose_path(rose_graph(3), mid, b, 0.5, 1.0).pieces[0]);
    CHECK(path_length(joined) == doctest::Approx(one + two).epsilon(1e-10));
}

TEST_CASE("distance upper bound basics") {
    const auto a = normalize_unit_entropy(rose_lengths({1.0, 2.0, 0.5, 1.1}));
    CHECK(distance_upper(a, a).upperBound == 0.0);

    const auto b = normalize_unit_entropy(rose_lengths({0.8, 1.1, 1.4, 0.9}));
    DistanceOptions opt;
    opt.refinement = 1;
    const double ab = distance_upper(a, b, opt).upperBound;
    const double ba = distance_upper(b, a, opt).upperBound;
    CHECK(ab > 0.0);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-3));
}

TEST_CASE("refinement never increases the distance bound") {
    const auto a = normalize_unit_entropy(rose_lengths({1.0, 2.5, 0.4, 1.0}));
    const auto b = normalize_unit_entropy(rose_lengths({0.6, 1.0, 1.8, 1.2}));
    double prev = kInf;
    for (int refine = 0; refine <= 2; ++refine) {
        DistanceOptions opt;
        opt.refinement = refine;
        const double v = distance_upper(a, b, opt).upperBound;
        CHECK(v <= prev * (1.0 + 1e-12));
        prev = v;
    }
}

TEST_CASE("embeddings preserve entropy and norms") {
    // S = {0..n-1} is the identity
    const auto l = rose_lengths(random_lengths(3));
    const std::vector<int> all = {0, 1, 2};
    const auto same = embed_extended(l, all, 3);
    for (int j = 0; j < 3; ++j)
        CHECK(same[j] == l[j]);

    // entropy invariance across random petal choices
    for (int trial = 0; trial < 20; ++trial) {
        const auto sub = rose_lengths(random_lengths(2));
        std::vector<int> S;
        std::uniform_int_distribution<int> pick(0, 3);
        while (S.size() != 2) {
            const int a0 = pick(rng());
            const int b0 = pick(rng());
            if (a0 < b0)
                S = {a0, b0};
        }
        const auto big = embed_extended(sub, S, 4);
        CHECK(entropy(big) == doctest::Approx(entropy(sub)).epsilon(1e-12));
    }

    // norm preservation for rose 2 -> rose 4
    const auto subHat = normalize_unit_entropy(rose_lengths(random_lengths(2)));
    const auto vSub = random_tangent(subHat);
    const std::vector<int> S = {1, 3};
    const auto bigHat = embed_extended(subHat, S, 4);
    const auto vBig = embed_vector(vSub, S, 4);
    CHECK(entropy_norm_sq(bigHat, vBig) ==
          doctest::Approx(entropy_norm_sq(subHat, vSub)).epsilon(1e-8));
}

TEST_CASE("extended endpoints must share finite support") {
    const auto a = normalize_unit_entropy(rose_lengths({1.0, 2.0, kInf, kInf}, true));
    const auto c = normalize_unit_entropy(rose_lengths({kInf, 1.0, 2.0, kInf}, true));
    CHECK_THROWS_AS(distance_upper(a, c), DomainError);
    const auto b = normalize_unit_entropy(rose_lengths({2.0, 1.0, kInf, kInf}, true));
    CHECK(distance_upper(a, b).upperBound > 0.0);
}
