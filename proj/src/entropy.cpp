#include "shiftmetric/entropy.hpp"

#include "shiftmetric/cycles.hpp"
#include "shiftmetric/errors.hpp"
#include "shiftmetric/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

namespace shiftmetric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double det_lu(std::vector<double> M, int dim) {
    double det = 1.0;
    for (int k = 0; k < dim; ++k) {
        int piv = k;
        double best = std::abs(M[static_cast<std::size_t>(k) * dim + k]);
        for (int r = k + 1; r < dim; ++r) {
            const double v = std::abs(M[static_cast<std::size_t>(r) * dim + k]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0)
            return 0.0;
        if (piv != k) {
            for (int c = 0; c < dim; ++c)
                std::swap(M[static_cast<std::size_t>(piv) * dim + c],
                          M[static_cast<std::size_t>(k) * dim + c]);
            det = -det;
        }
        const double pivot = M[static_cast<std::size_t>(k) * dim + k];
        det *= pivot;
        for (int r = k + 1; r < dim; ++r) {
            const double f = M[static_cast<std::size_t>(r) * dim + k] / pivot;
            if (f == 0.0)
                continue;
            for (int c = k + 1; c < dim; ++c)
                M[static_cast<std::size_t>(r) * dim + c] -=
                    f * M[static_cast<std::size_t>(k) * dim + c];
        }
    }
    return det;
}

// Power iteration with a diagonal shift (spec(A + sI) = spec(A) + s for
// nonnegative A), Collatz-Wielandt bracketing where the iterate stays
// strictly positive, and a stability window as fallback for reducible
// matrices.
double spectral_radius(const std::vector<double>& A, int dim) {
    double maxRowSum = 0.0;
    for (int r = 0; r < dim; ++r) {
        double s = 0.0;
        for (int c = 0; c < dim; ++c)
            s += A[static_cast<std::size_t>(r) * dim + c];
        maxRowSum = std::max(maxRowSum, s);
    }
    if (maxRowSum == 0.0)
        return 0.0;

    const double shift = 0.05 * maxRowSum;
    std::vector<double> B(A);
    for (int r = 0; r < dim; ++r)
        B[static_cast<std::size_t>(r) * dim + r] += shift;

    const auto& K = kernels::active();
    std::vector<double> x(dim, 1.0), y(dim, 0.0);
    double lambda = 0.0;
    int stable = 0;
    for (int iter = 0; iter < 500000; ++iter) {
        K.matvec(B.data(), x.data(), y.data(), dim, dim);
        double m = 0.0;
        for (int i = 0; i < dim; ++i)
            m = std::max(m, y[i]);
        if (m == 0.0)
            return 0.0;

        double cwLo = kInf, cwHi = 0.0;
        bool cwOk = true;
        for (int i = 0; i < dim; ++i) {
            if (x[i] < 1e-250) {
                cwOk = false;
                break;
            }
            const double r = y[i] / x[i];
            cwLo = std::min(cwLo, r);
            cwHi = std::max(cwHi, r);
        }
        if (cwOk && cwHi - cwLo <= 1e-13 * cwHi)
            return 0.5 * (cwLo + cwHi) - shift;

        const double est = m;
        if (std::abs(est - lambda) <= 1e-14 * std::max(est, 1e-30)) {
            if (++stable >= 50)
                return est - shift;
        } else {
            stable = 0;
        }
        lambda = est;
        for (int i = 0; i < dim; ++i)
            x[i] = y[i] / m;
    }
    return lambda - shift;
}

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double fa, double fb, double xtol, int maxIter = 200) {
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if (fa * fb > 0.0)
        throw SolverError("root is not bracketed: f(" + std::to_string(a) + ")=" +
                          std::to_string(fa) + ", f(" + std::to_string(b) + ")=" +
                          std::to_string(fb));
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < maxIter; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol || fb == 0.0)
            return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (xm > 0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

const std::vector<double>& subset_weights(int n) {
    static std::mutex mutex;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::vector<double> w((std::size_t(1) << n) - 1);
        for (std::size_t s = 1; s < (std::size_t(1) << n); ++s)
            w[s - 1] = 2.0 * std::popcount(s) - 1.0;
        it = cache.emplace(n, std::move(w)).first;
    }
    return it->second;
}

std::vector<double> subset_lengths(std::span<const double> l) {
    const int n = static_cast<int>(l.size());
    std::vector<double> ls((std::size_t(1) << n) - 1);
    for (std::size_t s = 1; s < (std::size_t(1) << n); ++s) {
        const int low = std::countr_zero(s);
        const std::size_t rest = s & (s - 1);
        ls[s - 1] = (rest == 0 ? 0.0 : ls[rest - 1]) + l[low];
    }
    return ls;
}

struct Bracket {
    double lo, hi;
};

// Perron bounds from row sums: entropy lies in
// [min_e log(outdeg e)/l(e), max_e log(outdeg e)/l(e)].
Bracket entropy_bracket(const MetricGraph& g, std::span<const double> l) {
    const int E = g.dirEdgeCount();
    double lo = kInf, hi = 0.0;
    for (int e = 0; e < E; ++e) {
        int outdeg = 0;
        for (int ep = 0; ep < E; ++ep)
            outdeg += g.arc(e, ep) ? 1 : 0;
        const double v = std::log(static_cast<double>(outdeg)) / l[MetricGraph::petal(e)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo * (1.0 - 1e-9), hi * (1.0 + 1e-9)};
}

double entropy_closed_finite(std::span<const double> l) {
    const int n = static_cast<int>(l.size());
    if (n < 2)
        throw DegenerateError("entropy needs at least 2 petals");
    if (n > 20)
        throw TooLargeError("closed entropy formula is capped at 20 petals (use spectral)");
    const auto& w = subset_weights(n);
    const auto ls = subset_lengths(l);
    const auto& K = kernels::active();

    const double logBase = std::log(2.0 * n - 1.0);
    double lmin = kInf, lmax = 0.0;
    for (double v : l) {
        lmin = std::min(lmin, v);
        lmax = std::max(lmax, v);
    }
    double a = logBase / lmax * (1.0 - 1e-9);
    double b = logBase / lmin * (1.0 + 1e-9);

    auto phi = [&](double h) { return K.exp_weighted_sums(w.data(), ls.data(), w.size(), h); };
    // widen if fp put the bracket on one side
    while (phi(a).s0 - 1.0 < 0.0 && a > 1e-300)
        a *= 0.5;
    while (phi(b).s0 - 1.0 > 0.0 && b < 1e300)
        b *= 2.0;

    double h = 0.5 * (a + b);
    for (int iter = 0; iter < 200; ++iter) {
        const auto s = phi(h);
        const double f = s.s0 - 1.0;
        const double df = -s.s1;
        if (f > 0.0)
            a = h;
        else
            b = h;
        double hn = df != 0.0 ? h - f / df : 0.5 * (a + b);
        if (!(hn > a) || !(hn < b))
            hn = 0.5 * (a + b);
        if (std::abs(hn - h) <= 1e-15 * std::max(1.0, std::abs(hn))) {
            h = hn;
            break;
        }
        h = hn;
        if (b - a <= 1e-15 * std::max(1.0, b))
            break;
    }
    return h;
}

std::vector<double> symmetric_phi(const MetricGraph& g, std::span<const double> lplus, double scale) {
    std::vector<double> phi(g.dirEdgeCount());
    for (int e = 0; e < g.dirEdgeCount(); ++e)
        phi[e] = scale * lplus[MetricGraph::petal(e)];
    return phi;
}

double entropy_spectral_finite(const MetricGraph& g, std::span<const double> l) {
    auto [a, b] = entropy_bracket(g, l);
    auto f = [&](double h) {
        const auto phi = symmetric_phi(g, l, h);
        const auto A = weighted_matrix(g, phi);
        const double rho = spectral_radius(A, g.dirEdgeCount());
        return std::log(std::max(rho, 1e-300));
    };
    double fa = f(a), fb = f(b);
    while (fa < 0.0 && a > 1e-300) {
        a *= 0.5;
        fa = f(a);
    }
    while (fb > 0.0 && b < 1e300) {
        b *= 2.0;
        fb = f(b);
    }
    return brent_root(f, a, b, fa, fb, 1e-14 * std::max(1.0, b));
}

// det(I_n - Abar(h*l)) with Abar(i,j) = (2 - delta_ij) exp(-h l_i).  Abar is
// diagonally similar to a symmetric matrix congruent to 2J - I, so exactly
// one eigenvalue is positive and F has a single sign change at the entropy.
double fbar_rose(std::span<const double> l, double h) {
    const int n = static_cast<int>(l.size());
    std::vector<double> M(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double e = std::exp(-h * l[i]);
        for (int j = 0; j < n; ++j)
            M[static_cast<std::size_t>(i) * n + j] = (i == j ? 1.0 - e : -2.0 * e);
    }
    return det_lu(std::move(M), n);
}

double entropy_det_finite(std::span<const double> l) {
    const int n = static_cast<int>(l.size());
    const double logBase = std::log(2.0 * n - 1.0);
    double lmin = kInf, lmax = 0.0;
    for (double v : l) {
        lmin = std::min(lmin, v);
        lmax = std::max(lmax, v);
    }
    double a = logBase / lmax * (1.0 - 1e-9);
    double b = logBase / lmin * (1.0 + 1e-9);
    auto f = [&](double h) { return fbar_rose(l, h); };
    double fa = f(a), fb = f(b);
    while (fa > 0.0 && a > 1e-300) {
        a *= 0.5;
        fa = f(a);
    }
    while (fb < 0.0 && b < 1e300) {
        b *= 2.0;
        fb = f(b);
    }
    // F runs negative below the root, positive above
    return brent_root(f, a, b, fa, fb, 1e-14 * std::max(1.0, b));
}

std::vector<double> finite_values(const LengthFunction& l) {
    std::vector<double> vals;
    for (int j = 0; j < l.n(); ++j)
        if (!std::isinf(l[j]))
            vals.push_back(l[j]);
    return vals;
}

bool cycles_in_reach(const MetricGraph& g) {
    if (g.isRose())
        return g.edgeCount() <= kCycleRoseCap;
    return g.dirEdgeCount() <= 8;
}

const CycleComplex& complex_for(const MetricGraph& g) {
    if (g.isRose())
        return rose_cycle_complex(g.edgeCount());
    thread_local std::unique_ptr<CycleComplex> local;
    local = std::make_unique<CycleComplex>(cycle_complex(
        std::make_shared<MetricGraph>(g), kCycleRoseCap));
    return *local;
}

double f_cycles_finite(const LengthFunction& l) {
    const CycleComplex& cc = complex_for(l.graph());
    const auto& K = kernels::active();
    std::vector<double> x(cc.termCount());
    K.matvec(cc.termCoeff.data(), l.values().data(), x.data(), cc.termCount(), cc.n());
    return K.exp_weighted_sums(cc.termWeight.data(), x.data(), x.size(), 1.0).s0;
}

} // namespace

std::vector<double> weighted_matrix(const MetricGraph& g, std::span<const double> phi) {
    const int E = g.dirEdgeCount();
    if (static_cast<int>(phi.size()) != E)
        throw DomainError("phi must be given on all directed edges");
    std::vector<double> A(static_cast<std::size_t>(E) * E, 0.0);
    for (int e = 0; e < E; ++e) {
        const double w = std::exp(-phi[e]);
        if (std::isnan(w) || std::isinf(w))
            throw DomainError("phi produced a non-finite weight");
        for (int ep = 0; ep < E; ++ep)
            if (g.arc(e, ep))
                A[static_cast<std::size_t>(e) * E + ep] = w;
    }
    return A;
}

double pressure(const MetricGraph& g, std::span<const double> phi) {
    std::vector<double> minusPhi(phi.begin(), phi.end());
    for (double& v : minusPhi) {
        if (std::isnan(v))
            throw DomainError("phi contains NaN");
        if (std::isinf(v) && v > 0)
            throw DomainError("pressure needs phi < +inf");
        v = -v;
    }
    const auto A = weighted_matrix(g, minusPhi);
    const double rho = spectral_radius(A, g.dirEdgeCount());
    if (rho <= 0.0)
        return -kInf;
    return std::log(rho);
}

double entropy(const LengthFunction& l, EntropyMethod method) {
    if (l.hasInfinite()) {
        const LengthFunction fin = l.finiteRestriction();
        return entropy(fin, method);
    }
    switch (method) {
    case EntropyMethod::Closed:
        if (!l.graph().isRose())
            throw DomainError("closed entropy formula applies to roses only");
        return entropy_closed_finite(l.values());
    case EntropyMethod::Det:
        if (!l.graph().isRose())
            throw DomainError("determinant entropy method applies to roses only");
        return entropy_det_finite(l.values());
    case EntropyMethod::Spectral:
        return entropy_spectral_finite(l.graph(), l.values());
    }
    throw DomainError("unknown entropy method");
}

double entropy(const LengthFunction& l) {
    if (l.graph().isRose()) {
        const int finite = l.hasInfinite()
                               ? static_cast<int>(finite_values(l).size())
                               : l.n();
        if (finite <= 20)
            return entropy(l, EntropyMethod::Closed);
    }
    return entropy(l, EntropyMethod::Spectral);
}

LengthFunction normalize_unit_entropy(const LengthFunction& l) {
    const double h = entropy(l);
    if (!(h > 0.0))
        throw DegenerateError("entropy is not positive");
    return l.scaled(h);
}

double F_gamma(const LengthFunction& l, FMethod method) {
    if (method == FMethod::Det) {
        const MetricGraph& g = l.graph();
        const int E = g.dirEdgeCount();
        const auto phi = symmetric_phi(g, l.values(), 1.0);
        auto A = weighted_matrix(g, phi);
        for (int i = 0; i < E; ++i)
            for (int j = 0; j < E; ++j) {
                double& v = A[static_cast<std::size_t>(i) * E + j];
                v = (i == j ? 1.0 : 0.0) - v;
            }
        return det_lu(std::move(A), E);
    }
    if (l.hasInfinite())
        return f_cycles_finite(l.finiteRestriction());
    return f_cycles_finite(l);
}

namespace {

std::vector<double> grad_F_cycles(const LengthFunction& l) {
    const CycleComplex& cc = complex_for(l.graph());
    const auto& K = kernels::active();
    const int T = cc.termCount();
    const int n = cc.n();
    std::vector<double> x(T), u(T);
    K.matvec(cc.termCoeff.data(), l.values().data(), x.data(), T, n);
    K.exp_neg(x.data(), T, 1.0, u.data());
    std::vector<double> grad(n, 0.0);
    for (int i = 0; i < T; ++i) {
        const double wu = cc.termWeight[i] * u[i];
        if (wu == 0.0)
            continue;
        for (int j = 0; j < n; ++j)
            grad[j] -= wu * cc.coeff(i, j);
    }
    return grad;
}

std::vector<double> grad_F_fd(const LengthFunction& l) {
    const std::vector<double>& base = l.values();
    std::vector<double> grad(l.n(), 0.0);
    for (int j = 0; j < l.n(); ++j) {
        if (std::isinf(base[j]))
            continue;
        const double step = 1e-5 * std::max(1.0, std::abs(base[j]));
        auto at = [&](double d) {
            std::vector<double> v(base);
            v[j] += d;
            return F_gamma(LengthFunction(l.graphPtr(), std::move(v), l.extended()),
                           FMethod::Det);
        };
        grad[j] = (8.0 * (at(step) - at(-step)) - (at(2 * step) - at(-2 * step))) /
                  (12.0 * step);
    }
    return grad;
}

DerivMethod resolve(const LengthFunction& l, DerivMethod m) {
    if (m != DerivMethod::Auto)
        return m;
    const MetricGraph& g = l.hasInfinite() ? *rose_graph(static_cast<int>(finite_values(l).size()))
                                           : l.graph();
    return cycles_in_reach(g) ? DerivMethod::Cycles : DerivMethod::FiniteDiff;
}

} // namespace

std::vector<double> grad_F(const LengthFunction& l, DerivMethod method) {
    method = resolve(l, method);
    if (method == DerivMethod::FiniteDiff)
        return grad_F_fd(l);
    if (!l.hasInfinite())
        return grad_F_cycles(l);
    const auto support = l.finiteSupport();
    const auto sub = grad_F_cycles(l.finiteRestriction());
    std::vector<double> grad(l.n(), 0.0);
    for (std::size_t i = 0; i < support.size(); ++i)
        grad[support[i]] = sub[i];
    return grad;
}

double hess_F_quadform(const LengthFunction& l, std::span<const double> v,
                       DerivMethod method) {
    if (static_cast<int>(v.size()) != l.n())
        throw DomainError("tangent vector size must match |E+|");
    method = resolve(l, method);
    if (method == DerivMethod::Cycles) {
        LengthFunction fin = l.hasInfinite() ? l.finiteRestriction() : l;
        std::vector<double> vf;
        if (l.hasInfinite()) {
            for (int j : l.finiteSupport())
                vf.push_back(v[j]);
        } else {
            vf.assign(v.begin(), v.end());
        }
        const CycleComplex& cc = complex_for(fin.graph());
        const auto& K = kernels::active();
        const int T = cc.termCount();
        std::vector<double> x(T), q(T);
        K.matvec(cc.termCoeff.data(), fin.values().data(), x.data(), T, cc.n());
        K.matvec(cc.termCoeff.data(), vf.data(), q.data(), T, cc.n());
        return K.exp_quad_sum(cc.termWeight.data(), q.data(), x.data(), T, 1.0);
    }
    // directional second difference of the determinant
    const std::vector<double>& base = l.values();
    double vmax = 0.0, lscale = 0.0;
    for (int j = 0; j < l.n(); ++j) {
        if (!std::isinf(base[j]))
            lscale = std::max(lscale, std::abs(base[j]));
        vmax = std::max(vmax, std::abs(v[j]));
    }
    if (vmax == 0.0)
        return 0.0;
    const double eps = 1e-3 * std::max(lscale, 1.0) / vmax;
    auto at = [&](double s) {
        std::vector<double> vals(base);
        for (int j = 0; j < l.n(); ++j)
            if (!std::isinf(vals[j]))
                vals[j] += s * v[j];
        return F_gamma(LengthFunction(l.graphPtr(), std::move(vals), l.extended()),
                       FMethod::Det);
    };
    const double f0 = at(0.0);
    return (16.0 * (at(eps) + at(-eps)) - (at(2 * eps) + at(-2 * eps)) - 30.0 * f0) /
           (12.0 * eps * eps);
}

double pairing_l_gradF(const LengthFunction& l, DerivMethod method) {
    method = resolve(l, method);
    if (method == DerivMethod::Cycles) {
        LengthFunction fin = l.hasInfinite() ? l.finiteRestriction() : l;
        const CycleComplex& cc = complex_for(fin.graph());
        const auto& K = kernels::active();
        const int T = cc.termCount();
        std::vector<double> x(T);
        K.matvec(cc.termCoeff.data(), fin.values().data(), x.data(), T, cc.n());
        return -K.exp_weighted_sums(cc.termWeight.data(), x.data(), T, 1.0).s1;
    }
    // derivative of s -> F((1+s) l) at 0
    auto at = [&](double s) {
        std::vector<double> vals(l.values());
        for (double& vv : vals)
            vv *= (1.0 + s);
        return F_gamma(LengthFunction(l.graphPtr(), std::move(vals), l.extended()),
                       FMethod::Det);
    };
    const double eps = 1e-5;
    return (8.0 * (at(eps) - at(-eps)) - (at(2 * eps) - at(-2 * eps))) / (12.0 * eps);
}

std::vector<double> grad_entropy(const LengthFunction& l) {
    const double h = entropy(l);
    const LengthFunction lhat = l.scaled(h);
    const auto g = grad_F(lhat);
    const double denom = pairing_l_gradF(lhat);
    if (std::abs(denom) < 1e-300)
        throw DegenerateError("<l, grad F> vanished at a unit-entropy point");
    std::vector<double> result(g);
    for (double& v : result)
        v *= -h * h / denom;
    return result;
}

} // namespace shiftmetric
