#include "shiftmetric/cycles.hpp"

#include "shiftmetric/errors.hpp"

#include <bit>
#include <map>
#include <mutex>
#include <string>

namespace shiftmetric {

namespace {

// Simple cycles of D_Gamma, each anchored at its smallest vertex.
void enumerate_cycles(const MetricGraph& g, std::vector<std::vector<int>>& cycles,
                      std::vector<std::uint32_t>& masks, std::size_t cap) {
    const int E = g.dirEdgeCount();
    std::vector<int> path;
    std::uint32_t onpath = 0;

    auto dfs = [&](auto&& self, int start, int v) -> void {
        for (int w = 0; w < E; ++w) {
            if (!g.arc(v, w))
                continue;
            if (w == start) {
                cycles.push_back(path);
                masks.push_back(onpath);
                if (cycles.size() > cap)
                    throw TooLargeError("cycle enumeration exceeds cap");
            } else if (w > start && !(onpath & (1u << w))) {
                path.push_back(w);
                onpath |= 1u << w;
                self(self, start, w);
                path.pop_back();
                onpath &= ~(1u << w);
            }
        }
    };

    for (int s = 0; s < E; ++s) {
        path.assign(1, s);
        onpath = 1u << s;
        dfs(dfs, s, s);
    }
}

} // namespace

CycleComplex cycle_complex(std::shared_ptr<const MetricGraph> graph,
                           int maxPetals, std::size_t simplexCap) {
    const MetricGraph& g = *graph;
    if (g.isRose()) {
        if (g.edgeCount() > maxPetals)
            throw TooLargeError("rose has " + std::to_string(g.edgeCount()) +
                                " petals, cycle complex capped at " +
                                std::to_string(maxPetals));
    } else if (g.dirEdgeCount() > 8) {
        throw TooLargeError("cycle complex for general graphs is capped at 8 directed edges");
    }

    CycleComplex cc;
    cc.graph = std::move(graph);
    enumerate_cycles(g, cc.cycles, cc.cycleMask, simplexCap);

    // Disjoint collections, plus sign aggregation by support mask.  The empty
    // collection contributes +1 at mask 0, making the weighted sum equal to
    // det(I - A_{Gamma,l}).
    std::map<std::uint32_t, long long> agg;
    agg[0] = 1;
    const int m = static_cast<int>(cc.cycles.size());
    std::vector<int> chosen;
    std::size_t count = 0;

    auto rec = [&](auto&& self, int from, std::uint32_t used, int sign) -> void {
        for (int i = from; i < m; ++i) {
            if (cc.cycleMask[i] & used)
                continue;
            chosen.push_back(i);
            cc.simplices.push_back(chosen);
            if (++count > simplexCap)
                throw TooLargeError("cycle complex simplex enumeration exceeds cap");
            agg[used | cc.cycleMask[i]] += -sign;
            self(self, i + 1, used | cc.cycleMask[i], -sign);
            chosen.pop_back();
        }
    };
    rec(rec, 0, 0u, 1);

    const int n = g.edgeCount();
    for (const auto& [mask, weight] : agg) {
        if (weight == 0)
            continue;
        cc.termMask.push_back(mask);
        cc.termWeight.push_back(static_cast<double>(weight));
        for (int j = 0; j < n; ++j)
            cc.termCoeff.push_back(static_cast<double>(
                std::popcount(mask & (3u << (2 * j)))));
    }
    return cc;
}

const CycleComplex& rose_cycle_complex(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<CycleComplex>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        auto cc = std::make_unique<CycleComplex>(cycle_complex(rose_graph(n), n));
        it = cache.emplace(n, std::move(cc)).first;
    }
    return *it->second;
}

} // namespace shiftmetric
