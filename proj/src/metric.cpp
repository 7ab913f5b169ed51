#include "shiftmetric/metric.hpp"

#include "shiftmetric/errors.hpp"
#include "shiftmetric/kernels.hpp"
#include "shiftmetric/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace shiftmetric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 16-point Gauss-Legendre rule on [-1, 1] (positive half; symmetric).
constexpr int kGL = 8;
constexpr double kGLNode[kGL] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542,
};
constexpr double kGLWeight[kGL] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806,
};

double norm2_with_pairing(const LengthFunction& lhat, std::span<const double> v,
                          DerivMethod method, double pairing) {
    if (std::abs(pairing) < 1e-300)
        throw DegenerateError("<l, grad F> vanished; basepoint is degenerate");
    const double q = hess_F_quadform(lhat, v, method);
    const double n2 = -q / pairing;
    return n2 < 0.0 && n2 > -1e-12 ? 0.0 : n2;
}

} // namespace

double tangency_defect(const LengthFunction& lhat, std::span<const double> v) {
    const auto g = grad_entropy(lhat);
    const auto& K = kernels::active();
    double vn = 0.0, gn = 0.0;
    for (int j = 0; j < lhat.n(); ++j) {
        vn += v[j] * v[j];
        gn += g[j] * g[j];
    }
    if (vn == 0.0 || gn == 0.0)
        return 0.0;
    return K.dot(v.data(), g.data(), v.size()) / std::sqrt(vn * gn);
}

std::vector<double> project_tangent(const LengthFunction& lhat, std::span<const double> w) {
    const auto g = grad_entropy(lhat);
    const auto& K = kernels::active();
    const double gg = K.dot(g.data(), g.data(), g.size());
    if (gg == 0.0)
        throw DegenerateError("entropy gradient vanished");
    const double c = K.dot(w.data(), g.data(), g.size()) / gg;
    std::vector<double> out(w.begin(), w.end());
    for (int j = 0; j < lhat.n(); ++j)
        out[j] -= c * g[j];
    return out;
}

TangentVector::TangentVector(LengthFunction basepoint, std::vector<double> components)
    : base(std::move(basepoint)), v(std::move(components)) {
    if (static_cast<int>(v.size()) != base.n())
        throw DomainError("tangent vector size must match |E+|");
    const double h = entropy(base);
    if (std::abs(h - 1.0) > 1e-6)
        throw DomainError("tangent basepoint must have unit entropy, got " + std::to_string(h));
    if (std::abs(tangency_defect(base, v)) > 1e-9)
        throw DomainError("vector is not tangent to the unit-entropy locus");
}

double entropy_norm_sq(const LengthFunction& lhat, std::span<const double> v,
                       DerivMethod method) {
    if (static_cast<int>(v.size()) != lhat.n())
        throw DomainError("tangent vector size must match |E+|");
    return norm2_with_pairing(lhat, v, method, pairing_l_gradF(lhat, method));
}

PathSpec PathSpec::reversed() const {
    PathSpec out;
    out.graph = graph;
    double lo = kInf, hi = -kInf;
    for (const auto& p : pieces) {
        lo = std::min(lo, p.t0);
        hi = std::max(hi, p.t1);
    }
    const double span = lo + hi;
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
        PathPiece q;
        q.t0 = span - it->t1;
        q.t1 = span - it->t0;
        auto len = it->lengths;
        q.lengths = [len, span](double t) { return len(span - t); };
        if (it->derivative) {
            auto der = it->derivative;
            q.derivative = [der, span](double t) {
                auto d = der(span - t);
                for (double& x : d)
                    x = -x;
                return d;
            };
        }
        out.pieces.push_back(std::move(q));
    }
    for (double c : genericityCrossings)
        out.genericityCrossings.push_back(span - c);
    std::sort(out.genericityCrossings.begin(), out.genericityCrossings.end());
    return out;
}

namespace {

// Speed of the normalized path at parameter t: lift (l, ldot) to the
// unit-entropy locus and take the entropy norm of d(h(l) l)/dt.
double path_speed(const PathSpec& path, const PathPiece& piece, double t) {
    std::vector<double> l = piece.lengths(t);
    std::vector<double> ld;
    if (piece.derivative) {
        ld = piece.derivative(t);
    } else {
        const double step = 1e-4 * std::max(piece.t1 - piece.t0, 1e-3);
        const auto lp = piece.lengths(t + step);
        const auto lp2 = piece.lengths(t + 2 * step);
        const auto lm = piece.lengths(t - step);
        const auto lm2 = piece.lengths(t - 2 * step);
        ld.resize(l.size());
        for (std::size_t j = 0; j < l.size(); ++j)
            ld[j] = (8.0 * (lp[j] - lm[j]) - (lp2[j] - lm2[j])) / (12.0 * step);
    }

    LengthFunction lf(path.graph, l);
    const double h = entropy(lf);
    LengthFunction lhat = lf.scaled(h);
    const auto gF = grad_F(lhat);
    const double pairing = pairing_l_gradF(lhat);
    if (std::abs(pairing) < 1e-300)
        throw DegenerateError("degenerate basepoint along path");

    // grad h at l, via grad F at the normalized point
    double hdot = 0.0;
    for (std::size_t j = 0; j < l.size(); ++j)
        hdot += (-h * h * gF[j] / pairing) * ld[j];

    std::vector<double> v(l.size());
    for (std::size_t j = 0; j < l.size(); ++j)
        v[j] = hdot * l[j] + h * ld[j];

    const double n2 = norm2_with_pairing(lhat, v, DerivMethod::Auto, pairing);
    return std::sqrt(std::max(n2, 0.0));
}

double piece_integral(const PathSpec& path, const PathPiece& piece, int panels) {
    const double width = (piece.t1 - piece.t0) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = piece.t0 + (p + 0.5) * width;
        const double half = 0.5 * width;
        double acc = 0.0;
        for (int i = 0; i < kGL; ++i) {
            acc += kGLWeight[i] * path_speed(path, piece, mid - half * kGLNode[i]);
            acc += kGLWeight[i] * path_speed(path, piece, mid + half * kGLNode[i]);
        }
        total += acc * half;
    }
    return total;
}

} // namespace

double path_length(const PathSpec& path, const QuadConfig& quad) {
    if (!path.graph)
        throw DomainError("path has no graph");
    double total = 0.0;
    for (const auto& piece : path.pieces) {
        if (!(piece.t1 > piece.t0))
            throw DomainError("path piece has empty parameter range");
        int panels = quad.basePanels;
        double coarse = piece_integral(path, piece, panels);
        bool converged = false;
        double fine = coarse;
        for (int d = 0; d < quad.maxDoublings; ++d) {
            panels *= 2;
            fine = piece_integral(path, piece, panels);
            if (std::abs(fine - coarse) <=
                std::max(quad.absTol, quad.relTol * std::abs(fine))) {
                converged = true;
                break;
            }
            coarse = fine;
        }
        if (!converged && quad.strict)
            throw AccuracyError("quadrature did not converge: estimates " +
                                std::to_string(coarse) + " vs " + std::to_string(fine));
        total += fine;
    }
    return total;
}

namespace {

// Piecewise-linear polygon in log-length coordinates through the control
// points; every sample is renormalized by path_length's entropy lift.
PathSpec polygon_path(std::shared_ptr<const MetricGraph> graph,
                      const std::vector<double>& u0, const std::vector<double>& u1,
                      const std::vector<std::vector<double>>& controls) {
    const int n = static_cast<int>(u0.size());
    std::vector<std::vector<double>> nodes;
    nodes.push_back(u0);
    for (const auto& c : controls)
        nodes.push_back(c);
    nodes.push_back(u1);

    PathSpec path;
    path.graph = std::move(graph);
    const int legs = static_cast<int>(nodes.size()) - 1;
    for (int i = 0; i < legs; ++i) {
        PathPiece piece;
        piece.t0 = static_cast<double>(i) / legs;
        piece.t1 = static_cast<double>(i + 1) / legs;
        const std::vector<double> a = nodes[i];
        const std::vector<double> b = nodes[i + 1];
        const double t0 = piece.t0, t1 = piece.t1;
        piece.lengths = [a, b, t0, t1, n](double t) {
            const double s = (t - t0) / (t1 - t0);
            std::vector<double> l(n);
            for (int j = 0; j < n; ++j)
                l[j] = std::exp((1.0 - s) * a[j] + s * b[j]);
            return l;
        };
        piece.derivative = [a, b, t0, t1, n](double t) {
            const double s = (t - t0) / (t1 - t0);
            std::vector<double> d(n);
            for (int j = 0; j < n; ++j)
                d[j] = std::exp((1.0 - s) * a[j] + s * b[j]) * (b[j] - a[j]) / (t1 - t0);
            return d;
        };
        path.pieces.push_back(std::move(piece));
    }
    return path;
}

} // namespace

DistanceResult distance_upper(const LengthFunction& a, const LengthFunction& b,
                              const DistanceOptions& opt) {
    if (a.n() != b.n())
        throw DomainError("endpoints live on different graphs");
    const auto suppA = a.finiteSupport();
    const auto suppB = b.finiteSupport();
    if (suppA != suppB)
        throw DomainError("extended endpoints must share finite support");

    LengthFunction fa = a.hasInfinite() ? a.finiteRestriction() : a;
    LengthFunction fb = b.hasInfinite() ? b.finiteRestriction() : b;
    for (const LengthFunction* l : {&fa, &fb}) {
        const double h = entropy(*l);
        if (std::abs(h - 1.0) > 1e-6)
            throw DomainError("distance endpoints must have unit entropy");
    }

    const int n = fa.n();
    std::vector<double> u0(n), u1(n);
    double gap = 0.0;
    for (int j = 0; j < n; ++j) {
        u0[j] = std::log(fa[j]);
        u1[j] = std::log(fb[j]);
        gap = std::max(gap, std::abs(u0[j] - u1[j]));
    }
    if (gap < 1e-14)
        return {0.0, false};

    DistanceResult result;
    result.upperBound = kInf;

    auto graph = fa.graphPtr();
    auto evaluate = [&](const std::vector<std::vector<double>>& controls,
                        const QuadConfig& quad) {
        return path_length(polygon_path(graph, u0, u1, controls), quad);
    };

    std::vector<std::vector<double>> bestControls; // from the previous level
    for (int level = 0; level <= std::max(opt.refinement, 0); ++level) {
        const int k = level;
        std::vector<std::vector<double>> controls;
        if (k > 0) {
            // seed by sampling the previous best polygon at the new fractions
            std::vector<std::vector<double>> nodes;
            nodes.push_back(u0);
            for (const auto& c : bestControls)
                nodes.push_back(c);
            nodes.push_back(u1);
            for (int i = 1; i <= k; ++i) {
                const double s = static_cast<double>(i) / (k + 1) *
                                 (static_cast<double>(nodes.size()) - 1);
                const int seg = std::min(static_cast<int>(s), static_cast<int>(nodes.size()) - 2);
                const double frac = s - seg;
                std::vector<double> p(n);
                for (int j = 0; j < n; ++j)
                    p[j] = (1.0 - frac) * nodes[seg][j] + frac * nodes[seg + 1][j];
                controls.push_back(std::move(p));
            }
            std::vector<double> flat;
            for (const auto& c : controls)
                flat.insert(flat.end(), c.begin(), c.end());
            auto unflatten = [&](const std::vector<double>& x) {
                std::vector<std::vector<double>> cs(k, std::vector<double>(n));
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < n; ++j)
                        cs[i][j] = x[static_cast<std::size_t>(i) * n + j];
                return cs;
            };
            auto objective = [&](const std::vector<double>& x) {
                return evaluate(unflatten(x), opt.optQuad);
            };
            nelder_mead(objective, flat, 0.05 * std::max(gap, 0.2),
                        opt.nmIterPerDim * k * n, opt.nmFtol, &result.stagnated);
            controls = unflatten(flat);
        }
        const double value = evaluate(controls, opt.quad);
        if (value < result.upperBound) {
            result.upperBound = value;
            bestControls = controls;
        }
    }
    return result;
}

LengthFunction embed_extended(const LengthFunction& sub, std::span<const int> S, int n) {
    const int m = static_cast<int>(S.size());
    if (m < 2)
        throw DomainError("embedding needs |S| >= 2");
    if (m != sub.n())
        throw DomainError("|S| must match the sub-rose petal count");
    if (!sub.graph().isRose())
        throw DomainError("embeddings are defined between roses");
    for (int i = 0; i < m; ++i) {
        if (S[i] < 0 || S[i] >= n)
            throw DomainError("S index out of range");
        if (i > 0 && S[i] <= S[i - 1])
            throw DomainError("S must be strictly increasing");
    }
    std::vector<double> vals(n, kInf);
    for (int i = 0; i < m; ++i)
        vals[S[i]] = sub[i];
    const bool ext = m < n || sub.extended();
    return LengthFunction(rose_graph(n), std::move(vals), ext);
}

std::vector<double> embed_vector(std::span<const double> v, std::span<const int> S, int n) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < S.size(); ++i)
        out[S[i]] = v[i];
    return out;
}

} // namespace shiftmetric
