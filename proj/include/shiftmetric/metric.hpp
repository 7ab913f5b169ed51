#ifndef SHIFTMETRIC_METRIC_HPP
#define SHIFTMETRIC_METRIC_HPP

#include "shiftmetric/entropy.hpp"
#include "shiftmetric/graph.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace shiftmetric {

// Tangent vector at a unit-entropy length function; construction checks the
// tangency pairing <v, grad h> = 0 to 1e-9 (relative).
struct TangentVector {
    TangentVector(LengthFunction basepoint, std::vector<double> components);
    LengthFunction base;
    std::vector<double> v;
};

// <v, grad h(lhat)> / (|v| |grad h|), the relative tangency defect.
double tangency_defect(const LengthFunction& lhat, std::span<const double> v);

// Orthogonal projection of w onto the tangent space at lhat.
std::vector<double> project_tangent(const LengthFunction& lhat, std::span<const double> w);

// ||(lhat, v)||^2 = -<v, H[F](lhat) v> / <lhat, grad F(lhat)>.
double entropy_norm_sq(const LengthFunction& lhat, std::span<const double> v,
                       DerivMethod method = DerivMethod::Auto);

struct QuadConfig {
    double relTol = 1e-8;
    double absTol = 1e-11;
    int basePanels = 2;   // per piece, doubled until the Richardson check passes
    int maxDoublings = 10;
    bool strict = true;   // throw AccuracyError instead of returning the best pair
};

// Piecewise-smooth curve of (un-normalized) length functions; evaluation
// composes with unit-entropy normalization.  `derivative` may be empty, in
// which case fourth-order central differences are used.
struct PathPiece {
    double t0, t1;
    std::function<std::vector<double>(double)> lengths;
    std::function<std::vector<double>(double)> derivative;
};

struct PathSpec {
    std::shared_ptr<const MetricGraph> graph;
    std::vector<PathPiece> pieces;
    std::vector<double> genericityCrossings; // filled by height segments

    PathSpec reversed() const;
};

// Entropy length: composite Gauss-Legendre per piece with panel doubling.
double path_length(const PathSpec& path, const QuadConfig& quad = {});

struct DistanceOptions {
    int refinement = 1;      // number of control points at the final level
    int nmIterPerDim = 150;  // Nelder-Mead budget
    double nmFtol = 1e-8;
    QuadConfig quad{};             // final evaluation
    QuadConfig optQuad{1e-5, 1e-8, 1, 6, false}; // inside the optimizer
};

struct DistanceResult {
    double upperBound = 0.0;
    bool stagnated = false;
};

// Upper bound on the entropy distance between two unit-entropy points:
// minimizes path length over piecewise-linear control polygons in log-length
// coordinates, each sample renormalized to unit entropy.  Levels with more
// control points are seeded from the previous optimum, so refinement never
// increases the bound.  Extended endpoints must share their finite support.
DistanceResult distance_upper(const LengthFunction& a, const LengthFunction& b,
                              const DistanceOptions& opt = {});

// epsilon_S: copy lengths onto the petals listed in S (0-based, increasing),
// infinity elsewhere.  Entropy is preserved exactly.
LengthFunction embed_extended(const LengthFunction& sub, std::span<const int> S, int n);
// Companion tangent embedding (zeros off S).
std::vector<double> embed_vector(std::span<const double> v, std::span<const int> S, int n);

} // namespace shiftmetric

#endif
