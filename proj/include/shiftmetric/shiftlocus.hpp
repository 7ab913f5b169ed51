#ifndef SHIFTMETRIC_SHIFTLOCUS_HPP
#define SHIFTMETRIC_SHIFTLOCUS_HPP

#include "shiftmetric/metric.hpp"
#include "shiftmetric/polynomial.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shiftmetric {

// Base length function on the (2D-2)-petal rose:
// (h1, h2/h1, ..., h_{D-1}/h1, 1, ..., 1).
LengthFunction base_length(const CriticalHeights& h);
LengthFunction base_length_unit(const CriticalHeights& h);

// Twist coordinates at a fixed set of heights.  H0 = max{h1, 1/h_{D-1}} is
// frozen at the basepoint; the trailing petals carry 1 + thetaTilde_j / H0.
struct TwistState {
    TwistState(CriticalHeights heights, std::vector<double> thetaTilde);
    CriticalHeights heights;
    std::vector<double> thetaTilde; // in [-1, 1]^{D-1}
    double H0;
};

LengthFunction twist_length(const TwistState& state);

// Linear height interpolation (1-t) h0 + t h1 mapped through base_length;
// split into pieces wherever a genericity condition h_i = D^m h_j crosses.
PathSpec height_segment(const CriticalHeights& h0, const CriticalHeights& h1);

// Twist line segment at frozen heights, thetaFrom -> thetaTo (H0 from the
// heights; both ends in [-1,1]^{D-1}).
PathSpec twist_segment(const CriticalHeights& h, std::span<const double> thetaFrom,
                       std::span<const double> thetaTo);

// Entropy length of a height/twist segment (the same integral as the
// embedded rose path).
double segment_entropy_length(const PathSpec& seg, const QuadConfig& quad = {});

struct RhoOptions {
    int refinement = 1; // control points for the height polygon
    DistanceOptions inner{};
    QuadConfig quad{};
};

struct RhoResult {
    double upperBound = 0.0;
    bool stagnated = false;
    std::string tag = "upper-bound";
};

// Upper bound on rho_D between two shift-locus height vectors, optionally
// with twist coordinates: minimum over {height polygon} and {twist segment +
// height polygon} with the twist leg placed at either endpoint.  The twist
// difference is wrapped into [-1, 1] (the twist coordinate has period 2).
RhoResult rho_upper(const CriticalHeights& hA, const CriticalHeights& hB,
                    const std::optional<std::vector<double>>& twistA = std::nullopt,
                    const std::optional<std::vector<double>>& twistB = std::nullopt,
                    const RhoOptions& opt = {});

// Parameterized family of critical heights h_j(k) = coeff_j k^power_j (ln k)^logpow_j.
struct SequenceFamily {
    int D = 3;
    std::string regime = "custom";
    std::vector<double> coeff, power, logpow; // one entry per height coordinate
    std::vector<double> kGrid;

    CriticalHeights at(double k) const;
    static SequenceFamily named(const std::string& regime, int D, double a,
                                std::vector<double> kGrid);
};

struct IndexSetReport {
    std::vector<int> indexSet; // 0-based petal indices of the asymptotically minimal class
    bool uniformlyDivergent = false;
    bool degenerating = false;
    bool singular = false;
    std::vector<double> probes;
    std::vector<std::vector<double>> lengthTable; // probes x (2D-2)
    std::vector<std::vector<double>> ratioTable;  // min-class ratio per petal
};

// Empirical index set: petal j leaves the minimal class when
// min_i l(e_i) / l(e_j) falls below 0.05 and keeps decreasing.
IndexSetReport index_set(const SequenceFamily& fam, std::span<const double> kProbe);

struct AsymptoticsReport {
    std::string caseTag;      // "2a", "2b", "2c", "2d", "D2-grow", "D2-shrink", "finite-limit"
    std::string rateFormula;  // human-readable predicted rate
    std::vector<double> probes, entropies, predictedRates, ratios;
    double comparabilityC = 0.0; // max(max ratio, 1/min ratio) for bounded cases
    bool pass = false;
};

// Checks the entropy growth regime against the predicted comparability
// class; bounded cases require the ratio to stay in [1/C, C], o(.) cases
// require it to decay.
AsymptoticsReport entropy_asymptotics(const SequenceFamily& fam,
                                      std::span<const double> kProbe);

struct CauchyReport {
    std::vector<double> probes;
    std::vector<double> legLengths; // consecutive family-curve segment lengths
    std::vector<double> tailSums;   // tailSums[i] = sum of legs from i on
    double decayRatio = 0.0;        // geometric mean of trailing leg ratios
    bool cauchyConsistent = false;
};

// Entropy lengths of the family curve between consecutive probes plus a
// geometric-decay fit; Cauchy-consistent when the trailing ratio is below
// 0.6 and the legs have collapsed relative to the first one.
CauchyReport cauchy_probe(const SequenceFamily& fam, std::span<const double> kProbe,
                          const QuadConfig& quad = {});

} // namespace shiftmetric

#endif
