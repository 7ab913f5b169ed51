#include "shiftmetric/shiftlocus.hpp"

#include "shiftmetric/errors.hpp"
#include "shiftmetric/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace shiftmetric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> base_values(const std::vector<double>& h) {
    const int D = static_cast<int>(h.size()) + 1;
    std::vector<double> l(2 * D - 2);
    l[0] = h[0];
    for (int j = 1; j < D - 1; ++j)
        l[j] = h[j] / h[0];
    for (int j = D - 1; j < 2 * D - 2; ++j)
        l[j] = 1.0;
    return l;
}

void require_shift_locus(const CriticalHeights& h) {
    if (!(h.h.back() > 0.0))
        throw DomainError("heights must be strictly positive (shift locus)");
}

} // namespace

LengthFunction base_length(const CriticalHeights& h) {
    require_shift_locus(h);
    const int D = h.degree();
    return LengthFunction(rose_graph(2 * D - 2), base_values(h.h));
}

LengthFunction base_length_unit(const CriticalHeights& h) {
    return normalize_unit_entropy(base_length(h));
}

TwistState::TwistState(CriticalHeights hs, std::vector<double> theta)
    : heights(std::move(hs)), thetaTilde(std::move(theta)) {
    require_shift_locus(heights);
    const int D = heights.degree();
    if (static_cast<int>(thetaTilde.size()) != D - 1)
        throw DomainError("expected D-1 twist coordinates");
    H0 = std::max(heights[0], 1.0 / heights.h.back());
    for (double t : thetaTilde) {
        if (!(std::abs(t) <= 1.0))
            throw DomainError("normalized twist coordinates lie in [-1, 1]");
        if (!(1.0 + t / H0 > 0.0))
            throw DomainError("twist leaves the space of length functions");
    }
}

LengthFunction twist_length(const TwistState& state) {
    const int D = state.heights.degree();
    std::vector<double> l = base_values(state.heights.h);
    for (int j = 0; j < D - 1; ++j)
        l[D - 1 + j] = 1.0 + state.thetaTilde[j] / state.H0;
    return LengthFunction(rose_graph(2 * D - 2), std::move(l));
}

namespace {

// Roots in (0,1) of h_i(t) = D^m h_j(t) along the linear interpolation.
std::vector<double> genericity_crossings(const std::vector<double>& h0,
                                         const std::vector<double>& h1, int D) {
    std::vector<double> out;
    const double logD = std::log(static_cast<double>(D));
    const int m = static_cast<int>(h0.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double rEnd0 = std::log(h0[i] / h0[j]) / logD;
            const double rEnd1 = std::log(h1[i] / h1[j]) / logD;
            const int pLo = std::max(0, static_cast<int>(std::floor(std::min(rEnd0, rEnd1))) - 1);
            const int pHi = static_cast<int>(std::ceil(std::max(rEnd0, rEnd1))) + 1;
            for (int p = pLo; p <= pHi; ++p) {
                const double c = std::pow(static_cast<double>(D), p);
                const double g0 = h0[i] - c * h0[j];
                const double g1 = h1[i] - c * h1[j];
                if (g0 == g1 || (g0 > 0) == (g1 > 0))
                    continue;
                const double t = g0 / (g0 - g1);
                if (t > 1e-12 && t < 1.0 - 1e-12)
                    out.push_back(t);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

} // namespace

PathSpec height_segment(const CriticalHeights& h0, const CriticalHeights& h1) {
    require_shift_locus(h0);
    require_shift_locus(h1);
    if (h0.degree() != h1.degree())
        throw DomainError("height segment endpoints must share the degree");
    const int D = h0.degree();
    const std::vector<double> a = h0.h, b = h1.h;

    PathSpec path;
    path.graph = rose_graph(2 * D - 2);
    path.genericityCrossings = genericity_crossings(a, b, D);

    std::vector<double> cuts = {0.0};
    cuts.insert(cuts.end(), path.genericityCrossings.begin(), path.genericityCrossings.end());
    cuts.push_back(1.0);

    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        PathPiece piece;
        piece.t0 = cuts[c];
        piece.t1 = cuts[c + 1];
        piece.lengths = [a, b](double t) {
            std::vector<double> h(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                h[i] = (1.0 - t) * a[i] + t * b[i];
            return base_values(h);
        };
        piece.derivative = [a, b, D](double t) {
            std::vector<double> d(2 * D - 2, 0.0);
            const double ht1 = (1.0 - t) * a[0] + t * b[0];
            const double dh1 = b[0] - a[0];
            d[0] = dh1;
            for (int j = 1; j < D - 1; ++j) {
                const double hj = (1.0 - t) * a[j] + t * b[j];
                const double dhj = b[j] - a[j];
                d[j] = (dhj * ht1 - hj * dh1) / (ht1 * ht1);
            }
            return d;
        };
        path.pieces.push_back(std::move(piece));
    }
    return path;
}

PathSpec twist_segment(const CriticalHeights& h, std::span<const double> thetaFrom,
                       std::span<const double> thetaTo) {
    require_shift_locus(h);
    const int D = h.degree();
    if (static_cast<int>(thetaFrom.size()) != D - 1 ||
        static_cast<int>(thetaTo.size()) != D - 1)
        throw DomainError("expected D-1 twist coordinates");
    // endpoint validation; linearity keeps the interior valid
    TwistState from(h, std::vector<double>(thetaFrom.begin(), thetaFrom.end()));
    TwistState to(h, std::vector<double>(thetaTo.begin(), thetaTo.end()));

    const double H0 = from.H0;
    const std::vector<double> base = base_values(h.h);
    const std::vector<double> t0v(thetaFrom.begin(), thetaFrom.end());
    const std::vector<double> t1v(thetaTo.begin(), thetaTo.end());

    PathSpec path;
    path.graph = rose_graph(2 * D - 2);
    PathPiece piece;
    piece.t0 = 0.0;
    piece.t1 = 1.0;
    piece.lengths = [base, t0v, t1v, H0, D](double t) {
        std::vector<double> l = base;
        for (int j = 0; j < D - 1; ++j)
            l[D - 1 + j] = 1.0 + ((1.0 - t) * t0v[j] + t * t1v[j]) / H0;
        return l;
    };
    piece.derivative = [t0v, t1v, H0, D](double) {
        std::vector<double> d(2 * D - 2, 0.0);
        for (int j = 0; j < D - 1; ++j)
            d[D - 1 + j] = (t1v[j] - t0v[j]) / H0;
        return d;
    };
    path.pieces.push_back(std::move(piece));
    return path;
}

double segment_entropy_length(const PathSpec& seg, const QuadConfig& quad) {
    return path_length(seg, quad);
}

namespace {

double polygon_height_length(const CriticalHeights& hA, const CriticalHeights& hB,
                             const std::vector<std::vector<double>>& controls,
                             const QuadConfig& quad) {
    std::vector<CriticalHeights> nodes;
    nodes.push_back(hA);
    for (const auto& c : controls) {
        std::vector<double> h(c.size());
        for (std::size_t j = 0; j < c.size(); ++j)
            h[j] = std::exp(c[j]);
        std::sort(h.begin(), h.end(), std::greater<>());
        nodes.emplace_back(std::move(h));
    }
    nodes.push_back(hB);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        total += segment_entropy_length(height_segment(nodes[i], nodes[i + 1]), quad);
    return total;
}

double wrap_twist(double delta) {
    // twist coordinates have period 2; take the short way around
    double d = std::fmod(delta, 2.0);
    if (d > 1.0)
        d -= 2.0;
    if (d < -1.0)
        d += 2.0;
    return d;
}

} // namespace

RhoResult rho_upper(const CriticalHeights& hA, const CriticalHeights& hB,
                    const std::optional<std::vector<double>>& twistA,
                    const std::optional<std::vector<double>>& twistB,
                    const RhoOptions& opt) {
    require_shift_locus(hA);
    require_shift_locus(hB);
    if (hA.degree() != hB.degree())
        throw DomainError("rho_upper endpoints must share the degree");
    const int m = hA.degree() - 1;

    std::vector<double> tDelta(m, 0.0);
    bool hasTwist = false;
    if (twistA || twistB) {
        const std::vector<double> ta = twistA.value_or(std::vector<double>(m, 0.0));
        const std::vector<double> tb = twistB.value_or(std::vector<double>(m, 0.0));
        if (static_cast<int>(ta.size()) != m || static_cast<int>(tb.size()) != m)
            throw DomainError("twist coordinates need D-1 entries");
        for (int j = 0; j < m; ++j) {
            tDelta[j] = wrap_twist(tb[j] - ta[j]);
            if (std::abs(tDelta[j]) > 1e-15)
                hasTwist = true;
        }
    }

    double heightGap = 0.0;
    for (int j = 0; j < m; ++j)
        heightGap = std::max(heightGap, std::abs(std::log(hA[j] / hB[j])));

    RhoResult result;
    if (heightGap < 1e-14 && !hasTwist)
        return result;

    // twist leg, placed at whichever endpoint makes it cheaper
    double twistCost = 0.0;
    if (hasTwist) {
        const std::vector<double> zero(m, 0.0);
        const double atA =
            segment_entropy_length(twist_segment(hA, zero, tDelta), opt.quad);
        const double atB =
            segment_entropy_length(twist_segment(hB, zero, tDelta), opt.quad);
        twistCost = std::min(atA, atB);
    }

    double heightCost = 0.0;
    if (heightGap >= 1e-14) {
        heightCost = polygon_height_length(hA, hB, {}, opt.quad);
        for (int level = 1; level <= opt.refinement; ++level) {
            const int k = level;
            std::vector<double> flat;
            for (int i = 1; i <= k; ++i) {
                const double s = static_cast<double>(i) / (k + 1);
                for (int j = 0; j < m; ++j)
                    flat.push_back((1.0 - s) * std::log(hA[j]) + s * std::log(hB[j]));
            }
            auto unflatten = [&](const std::vector<double>& x) {
                std::vector<std::vector<double>> cs(k, std::vector<double>(m));
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < m; ++j)
                        cs[i][j] = x[static_cast<std::size_t>(i) * m + j];
                return cs;
            };
            auto objective = [&](const std::vector<double>& x) {
                return polygon_height_length(hA, hB, unflatten(x), opt.inner.optQuad);
            };
            nelder_mead(objective, flat, 0.1, opt.inner.nmIterPerDim * k * m,
                        opt.inner.nmFtol, &result.stagnated);
            const double refined =
                polygon_height_length(hA, hB, unflatten(flat), opt.quad);
            heightCost = std::min(heightCost, refined);
        }
    }

    result.upperBound = twistCost + heightCost;
    return result;
}

CriticalHeights SequenceFamily::at(double k) const {
    if (!(k > 0.0))
        throw DomainError("family parameter k must be positive");
    const int m = D - 1;
    if (static_cast<int>(coeff.size()) != m || static_cast<int>(power.size()) != m ||
        static_cast<int>(logpow.size()) != m)
        throw DomainError("family needs D-1 coefficient/power/logpow entries");
    std::vector<double> h(m);
    for (int j = 0; j < m; ++j) {
        double v = coeff[j] * std::pow(k, power[j]);
        if (logpow[j] != 0.0) {
            if (k <= 1.0)
                throw DomainError("log-power families need k > 1");
            v *= std::pow(std::log(k), logpow[j]);
        }
        h[j] = v;
    }
    std::sort(h.begin(), h.end(), std::greater<>());
    return CriticalHeights(std::move(h));
}

SequenceFamily SequenceFamily::named(const std::string& regime, int D, double a,
                                     std::vector<double> kGrid) {
    if (D < 2)
        throw DomainError("degree must be at least 2");
    SequenceFamily fam;
    fam.D = D;
    fam.regime = regime;
    fam.kGrid = std::move(kGrid);
    const int m = D - 1;
    fam.coeff.assign(m, 1.0);
    fam.power.assign(m, 1.0);
    fam.logpow.assign(m, 0.0);
    if (regime == "h1") { // h_j = a*k for every j (degree 2: h1 = a k)
        fam.coeff.assign(m, a);
    } else if (regime == "h1const") { // h1 = a fixed, the rest a/k
        fam.coeff.assign(m, a);
        fam.power.assign(m, -1.0);
        fam.power[0] = 0.0;
    } else if (regime == "h2=a*h1") { // (k, ..., a k)
        for (int j = 1; j < m; ++j)
            fam.coeff[j] = a;
    } else if (regime == "h2=h1/log") { // (k, ..., k / ln k)
        for (int j = 1; j < m; ++j)
            fam.logpow[j] = -1.0;
    } else if (regime == "h2=a*h1^2") { // (1/k, ..., a/k^2)
        fam.power.assign(m, -1.0);
        fam.power[m - 1] = -2.0;
        fam.coeff[m - 1] = a;
    } else if (regime == "h2=h1^p") { // (1/k, ..., 1/k^a)
        fam.power.assign(m, -1.0);
        fam.power[m - 1] = -a;
    } else if (regime == "h2=sqrt(h1)") { // (k, ..., sqrt k)
        fam.power[m - 1] = 0.5;
    } else if (regime != "custom") {
        throw DomainError("unknown regime '" + regime + "'");
    }
    return fam;
}

namespace {

enum class Trend { Zero, Finite, Infinite, Unclear };

// Empirical trend of a positive sequence sampled at increasing probes.
Trend coordinate_trend(const std::vector<double>& vals) {
    bool nonDecreasing = true, nonIncreasing = true;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] > vals[i - 1] * (1.0 + 1e-9))
            nonIncreasing = false;
        if (vals[i] < vals[i - 1] * (1.0 - 1e-9))
            nonDecreasing = false;
    }
    const double first = vals.front(), last = vals.back();
    if (nonDecreasing && last > 50.0 && last > 4.0 * first)
        return Trend::Infinite;
    if (nonIncreasing && last < 0.1 && last < 0.25 * first)
        return Trend::Zero;
    if (last <= 4.0 * first + 1e-12 && first <= 4.0 * last + 1e-12)
        return Trend::Finite;
    return Trend::Unclear;
}

std::string format_table(const std::vector<double>& probes,
                         const std::vector<std::vector<double>>& table) {
    std::ostringstream os;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        os << "k=" << probes[p] << ":";
        for (double v : table[p])
            os << ' ' << v;
        os << '\n';
    }
    return os.str();
}

// Symbolic growth class of c * k^p * (ln k)^q as k -> infinity.
struct Asym {
    double p, q, c;
};

Trend asym_limit(const Asym& a) {
    if (a.p > 0 || (a.p == 0 && a.q > 0))
        return Trend::Infinite;
    if (a.p < 0 || (a.p == 0 && a.q < 0))
        return Trend::Zero;
    return Trend::Finite;
}

Asym asym_ratio(const Asym& num, const Asym& den) {
    return {num.p - den.p, num.q - den.q, num.c / den.c};
}

bool asym_less(const Asym& a, const Asym& b) { // a grows strictly slower
    if (a.p != b.p)
        return a.p < b.p;
    if (a.q != b.q)
        return a.q < b.q;
    return a.c < b.c;
}

} // namespace

IndexSetReport index_set(const SequenceFamily& fam, std::span<const double> kProbe) {
    if (kProbe.size() < 3)
        throw DomainError("index set classification needs at least 3 probes");
    for (std::size_t i = 1; i < kProbe.size(); ++i)
        if (!(kProbe[i] > kProbe[i - 1]))
            throw DomainError("probe grid must be increasing");

    IndexSetReport rep;
    rep.probes.assign(kProbe.begin(), kProbe.end());
    const int n = 2 * fam.D - 2;
    for (double k : kProbe)
        rep.lengthTable.push_back(base_length(fam.at(k)).values());

    // trailing petals are constant 1, so the minimal bounded class is never empty
    std::vector<double> minClass(kProbe.size(), kInf);
    for (std::size_t p = 0; p < kProbe.size(); ++p)
        for (double v : rep.lengthTable[p])
            minClass[p] = std::min(minClass[p], v);

    rep.ratioTable.assign(kProbe.size(), std::vector<double>(n));
    for (std::size_t p = 0; p < kProbe.size(); ++p)
        for (int j = 0; j < n; ++j)
            rep.ratioTable[p][j] = minClass[p] / rep.lengthTable[p][j];

    bool divergent = false;
    for (int j = 0; j < n; ++j) {
        std::vector<double> col;
        for (std::size_t p = 0; p < kProbe.size(); ++p)
            col.push_back(rep.lengthTable[p][j]);
        const Trend t = coordinate_trend(col);
        if (t == Trend::Unclear)
            throw ClassificationError("coordinate " + std::to_string(j + 1) +
                                      " has no clear trend\n" +
                                      format_table(rep.probes, rep.lengthTable));
        if (t != Trend::Finite)
            divergent = true;
    }
    rep.uniformlyDivergent = divergent;
    rep.degenerating = rep.lengthTable.back()[0] > 1e3;

    for (int j = 0; j < n; ++j) {
        const double qFirst = rep.ratioTable.front()[j];
        const double qLast = rep.ratioTable.back()[j];
        if (qLast < 0.05) {
            if (qLast > 0.95 * qFirst)
                throw ClassificationError("ratio for petal " + std::to_string(j + 1) +
                                          " is small but not decreasing\n" +
                                          format_table(rep.probes, rep.ratioTable));
            continue; // petal j is asymptotically larger than the minimal class
        }
        rep.indexSet.push_back(j);
    }
    rep.singular = rep.indexSet.size() == 1;
    return rep;
}

AsymptoticsReport entropy_asymptotics(const SequenceFamily& fam,
                                      std::span<const double> kProbe) {
    if (kProbe.size() < 3)
        throw DomainError("asymptotics need at least 3 probes");
    AsymptoticsReport rep;
    rep.probes.assign(kProbe.begin(), kProbe.end());

    std::vector<std::vector<double>> hs;
    for (double k : kProbe) {
        const CriticalHeights h = fam.at(k);
        hs.push_back(h.h);
        rep.entropies.push_back(entropy(base_length(h)));
    }

    // the regime is classified from the family's exponents: sort the
    // coordinate formulas by asymptotic size, largest first
    const int m = fam.D - 1;
    std::vector<Asym> terms(m);
    for (int j = 0; j < m; ++j)
        terms[j] = {fam.power[j], fam.logpow[j], fam.coeff[j]};
    std::sort(terms.begin(), terms.end(),
              [](const Asym& x, const Asym& y) { return asym_less(y, x); });
    const Asym h1 = terms.front(), hLast = terms.back();
    const Asym hPrev = terms[m >= 2 ? m - 2 : 0];
    const Asym h1sq = {2 * h1.p, 2 * h1.q, h1.c * h1.c};

    const Trend h1T = asym_limit(h1);
    const Trend lastOverH1 = asym_limit(asym_ratio(hLast, h1));
    const Trend lastOverPrev = asym_limit(asym_ratio(hLast, hPrev));
    const Trend lastOverH1sq = asym_limit(asym_ratio(hLast, h1sq));

    auto boundedRatioCheck = [&](auto&& rateOf, const std::string& formula) {
        rep.rateFormula = formula;
        double lo = kInf, hi = 0.0;
        for (std::size_t p = 0; p < hs.size(); ++p) {
            const double r = rep.entropies[p] / rateOf(hs[p]);
            rep.predictedRates.push_back(rateOf(hs[p]));
            rep.ratios.push_back(r);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        rep.comparabilityC = std::max(hi, 1.0 / lo);
        rep.pass = rep.comparabilityC <= 10.0;
    };
    auto decayCheck = [&](auto&& rateOf, const std::string& formula) {
        rep.rateFormula = formula;
        for (std::size_t p = 0; p < hs.size(); ++p) {
            rep.predictedRates.push_back(rateOf(hs[p]));
            rep.ratios.push_back(rep.entropies[p] / rateOf(hs[p]));
        }
        bool dec = true;
        for (std::size_t p = 1; p < rep.ratios.size(); ++p)
            dec = dec && rep.ratios[p] < rep.ratios[p - 1] * (1.0 + 1e-9);
        rep.pass = dec && rep.ratios.back() <= 0.5 * rep.ratios.front();
        rep.comparabilityC = 0.0;
    };

    auto rateH1OverLast = [](const std::vector<double>& h) { return h.front() / h.back(); };
    auto rateInvH1 = [](const std::vector<double>& h) { return 1.0 / h.front(); };
    auto rateConst = [](const std::vector<double>&) { return 1.0; };

    if (fam.D == 2) {
        if (h1T == Trend::Infinite) {
            rep.caseTag = "D2-grow";
            decayCheck(rateConst, "entropy -> 0");
        } else if (h1T == Trend::Zero) {
            rep.caseTag = "D2-shrink";
            decayCheck(rateInvH1, "entropy = o(1/h1)");
        } else {
            rep.caseTag = "finite-limit";
            boundedRatioCheck(rateConst, "entropy -> const");
        }
        return rep;
    }

    if (h1T != Trend::Zero && lastOverH1 == Trend::Finite) {
        rep.caseTag = "finite-limit";
        boundedRatioCheck(rateConst, "entropy -> const");
    } else if (lastOverH1sq == Trend::Finite) {
        rep.caseTag = "2b";
        boundedRatioCheck(rateH1OverLast, "entropy ~ h1/h_{D-1}");
    } else if (lastOverPrev == Trend::Finite && lastOverH1sq == Trend::Zero) {
        rep.caseTag = "2a";
        boundedRatioCheck(rateH1OverLast, "entropy ~ h1/h_{D-1}");
    } else if (lastOverH1sq == Trend::Infinite) {
        rep.caseTag = "2d";
        decayCheck(rateInvH1, "entropy = o(1/h1)");
    } else {
        rep.caseTag = "2c";
        decayCheck(rateH1OverLast, "entropy = o(h1/h_{D-1})");
    }
    return rep;
}

namespace {

// Segment along the family curve itself (geometric interpolation in k).
// Straight height chords between geometrically spaced probes can bulge off
// curves like h_{D-1} = a h_1^2 by a k-independent amount, which would hide
// the Cauchy behavior the probe is looking for.
PathSpec family_segment(const SequenceFamily& fam, double k0, double k1) {
    PathSpec path;
    path.graph = rose_graph(2 * fam.D - 2);
    PathPiece piece;
    piece.t0 = 0.0;
    piece.t1 = 1.0;
    const double logK0 = std::log(k0), logK1 = std::log(k1);
    piece.lengths = [fam, logK0, logK1](double t) {
        const double k = std::exp((1.0 - t) * logK0 + t * logK1);
        return base_values(fam.at(k).h);
    };
    path.pieces.push_back(std::move(piece));
    return path;
}

} // namespace

CauchyReport cauchy_probe(const SequenceFamily& fam, std::span<const double> kProbe,
                          const QuadConfig& quad) {
    if (kProbe.size() < 4)
        throw DomainError("cauchy probe needs at least 4 probes");
    CauchyReport rep;
    rep.probes.assign(kProbe.begin(), kProbe.end());
    for (std::size_t p = 0; p + 1 < kProbe.size(); ++p) {
        const auto seg = family_segment(fam, kProbe[p], kProbe[p + 1]);
        rep.legLengths.push_back(segment_entropy_length(seg, quad));
    }
    rep.tailSums.assign(rep.legLengths.size(), 0.0);
    double tail = 0.0;
    for (int i = static_cast<int>(rep.legLengths.size()) - 1; i >= 0; --i) {
        tail += rep.legLengths[i];
        rep.tailSums[i] = tail;
    }

    // Geometric fit over the last few strictly positive legs; legs that
    // underflowed to zero already witness a summable tail.
    const std::size_t legs = rep.legLengths.size();
    const double first = rep.legLengths.front();
    const double last = rep.legLengths.back();
    double logSum = 0.0;
    int window = 0;
    for (std::size_t i = legs - 1; i >= 1 && window < 3; --i) {
        if (rep.legLengths[i] > 0.0 && rep.legLengths[i - 1] > 0.0) {
            logSum += std::log(rep.legLengths[i] / rep.legLengths[i - 1]);
            ++window;
        } else {
            break;
        }
    }
    rep.decayRatio = window > 0 ? std::exp(logSum / window) : 0.0;
    const bool collapsed = last <= std::max(1e-30, 1e-9 * first);
    rep.cauchyConsistent =
        collapsed || (rep.decayRatio <= 0.6 && last <= 0.2 * first);
    return rep;
}

} // namespace shiftmetric
