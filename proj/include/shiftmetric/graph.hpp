#ifndef SHIFTMETRIC_GRAPH_HPP
#define SHIFTMETRIC_GRAPH_HPP

#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace shiftmetric {

// Finite connected graph with directed-edge pairs e <-> ebar.  Undirected
// edge j in E+ is stored as directed edges 2j (forward) and 2j+1 (reverse),
// so the involution is index xor 1.  Validated on construction: fixed-point
// free involution by layout, connected, every valence >= 3, |V| - |E+| < 0.
class MetricGraph {
public:
    MetricGraph(int vertexCount, std::vector<std::pair<int, int>> edges);

    // One vertex, n loops, 2n directed edges.
    static MetricGraph rose(int n);

    int vertexCount() const { return vertex_count_; }
    int edgeCount() const { return static_cast<int>(origin_.size()) / 2; } // |E+|
    int dirEdgeCount() const { return static_cast<int>(origin_.size()); }  // |E|
    int origin(int e) const { return origin_[e]; }
    int terminus(int e) const { return terminus_[e]; }
    static constexpr int reverse(int e) { return e ^ 1; }
    static constexpr int petal(int e) { return e >> 1; }

    // A_Gamma(e, e') = 1 iff t(e) = o(e') and e' != ebar.
    bool arc(int e, int ep) const {
        return terminus_[e] == origin_[ep] && ep != reverse(e);
    }
    bool isRose() const { return vertex_count_ == 1; }
    int eulerCharacteristic() const { return vertex_count_ - edgeCount(); }

    // Dense |E| x |E| 0/1 matrix, row-major.
    std::vector<double> adjacencyMatrix() const;

private:
    int vertex_count_;
    std::vector<int> origin_, terminus_; // indexed by directed edge
};

// Shared, memoized rose graphs (length functions hold references to these).
std::shared_ptr<const MetricGraph> rose_graph(int n);

// Positive edge lengths on E+; +inf entries are allowed only in extended
// mode (points of the completed space).
class LengthFunction {
public:
    LengthFunction(std::shared_ptr<const MetricGraph> graph,
                   std::vector<double> lengths, bool extended = false);

    const MetricGraph& graph() const { return *graph_; }
    std::shared_ptr<const MetricGraph> graphPtr() const { return graph_; }
    int n() const { return static_cast<int>(lengths_.size()); }
    double operator[](int j) const { return lengths_[j]; }
    const std::vector<double>& values() const { return lengths_; }
    bool extended() const { return extended_; }

    bool hasInfinite() const;
    std::vector<int> finiteSupport() const; // petal indices with finite length
    // Restriction to the finite petals, as a length function on a smaller rose.
    LengthFunction finiteRestriction() const;

    LengthFunction scaled(double a) const;

private:
    std::shared_ptr<const MetricGraph> graph_;
    std::vector<double> lengths_;
    bool extended_;
};

LengthFunction rose_lengths(std::vector<double> lengths, bool extended = false);

using BigCount = unsigned __int128;

// Exact number of circuits (reduced closed edge paths with a distinguished
// starting edge and non-backtracking closure) of length <= T.  Roses are
// counted by dynamic programming over petal-usage compositions; other graphs
// by bounded DFS.  Throws TooLargeError when the result would exceed guard.
BigCount circuit_count(const MetricGraph& g, std::span<const double> lengths,
                       double T, BigCount guard = 10'000'000);

} // namespace shiftmetric

#endif
