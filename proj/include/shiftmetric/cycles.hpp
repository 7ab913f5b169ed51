#ifndef SHIFTMETRIC_CYCLES_HPP
#define SHIFTMETRIC_CYCLES_HPP

#include "shiftmetric/graph.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace shiftmetric {

// Cycle complex of the edge digraph D_Gamma: vertices are the directed edges
// of Gamma, arcs follow A_Gamma.  `cycles` lists the simple cycles (anchored
// at their smallest vertex, so each appears once); `simplices` lists every
// nonempty collection of pairwise vertex-disjoint cycles, as indices into
// `cycles`.
//
// The aggregated term table drives the determinant-expansion sums: each term
// is a distinct support mask with weight sum_{collections with that support}
// (-1)^{#cycles}, plus the empty collection with weight +1.  coeff(i, j) is
// the number of directed edges over petal j in the support, in {0,1,2}.
struct CycleComplex {
    std::shared_ptr<const MetricGraph> graph;
    std::vector<std::vector<int>> cycles;
    std::vector<std::uint32_t> cycleMask;
    std::vector<std::vector<int>> simplices;

    std::vector<double> termWeight;      // aggregated signed counts
    std::vector<double> termCoeff;       // row-major termCount x n
    std::vector<std::uint32_t> termMask; // support of each term

    int n() const { return graph->edgeCount(); }
    int termCount() const { return static_cast<int>(termWeight.size()); }
    double coeff(int term, int petal) const { return termCoeff[static_cast<std::size_t>(term) * n() + petal]; }
};

// Exhaustive enumeration; roses up to maxPetals petals, other graphs up to 8
// directed edges.  Throws TooLargeError beyond the caps.
CycleComplex cycle_complex(std::shared_ptr<const MetricGraph> graph,
                           int maxPetals = 4, std::size_t simplexCap = 5'000'000);

// Memoized complex for the n-petal rose.
const CycleComplex& rose_cycle_complex(int n);

// Largest rose for which cycle-complex formulas are used by default.
constexpr int kCycleRoseCap = 4;

} // namespace shiftmetric

#endif
