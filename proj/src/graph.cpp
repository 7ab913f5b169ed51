#include "shiftmetric/graph.hpp"

#include "shiftmetric/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

namespace shiftmetric {

MetricGraph::MetricGraph(int vertexCount, std::vector<std::pair<int, int>> edges)
    : vertex_count_(vertexCount) {
    if (vertexCount < 1)
        throw DomainError("graph needs at least one vertex");
    origin_.reserve(2 * edges.size());
    terminus_.reserve(2 * edges.size());
    for (const auto& [o, t] : edges) {
        if (o < 0 || o >= vertexCount || t < 0 || t >= vertexCount)
            throw DomainError("edge endpoint out of range");
        origin_.push_back(o);
        terminus_.push_back(t);
        origin_.push_back(t);
        terminus_.push_back(o);
    }
    const int m = edgeCount();
    if (vertex_count_ - m >= 0)
        throw DomainError("graph must have negative Euler characteristic");

    std::vector<int> valence(vertexCount, 0);
    for (int j = 0; j < m; ++j) {
        valence[origin_[2 * j]] += 1;
        valence[terminus_[2 * j]] += 1;
    }
    for (int v = 0; v < vertexCount; ++v)
        if (valence[v] < 3)
            throw DomainError("vertex " + std::to_string(v) + " has valence < 3");

    // connectivity over undirected edges
    std::vector<char> seen(vertexCount, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int e = 0; e < dirEdgeCount(); ++e) {
            if (origin_[e] == v && !seen[terminus_[e]]) {
                seen[terminus_[e]] = 1;
                stack.push_back(terminus_[e]);
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw DomainError("graph is not connected");
}

MetricGraph MetricGraph::rose(int n) {
    if (n < 2)
        throw DomainError("rose graph needs at least 2 petals");
    std::vector<std::pair<int, int>> edges(n, {0, 0});
    return MetricGraph(1, std::move(edges));
}

std::vector<double> MetricGraph::adjacencyMatrix() const {
    const int E = dirEdgeCount();
    std::vector<double> A(static_cast<std::size_t>(E) * E, 0.0);
    for (int e = 0; e < E; ++e)
        for (int ep = 0; ep < E; ++ep)
            if (arc(e, ep))
                A[static_cast<std::size_t>(e) * E + ep] = 1.0;
    return A;
}

std::shared_ptr<const MetricGraph> rose_graph(int n) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const MetricGraph>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_shared<MetricGraph>(MetricGraph::rose(n))).first;
    return it->second;
}

LengthFunction::LengthFunction(std::shared_ptr<const MetricGraph> graph,
                               std::vector<double> lengths, bool extended)
    : graph_(std::move(graph)), lengths_(std::move(lengths)), extended_(extended) {
    if (!graph_)
        throw DomainError("length function needs a graph");
    if (static_cast<int>(lengths_.size()) != graph_->edgeCount())
        throw DomainError("length vector size does not match |E+|");
    for (double v : lengths_) {
        if (std::isnan(v) || v <= 0.0)
            throw DomainError("edge lengths must be positive");
        if (std::isinf(v) && !extended_)
            throw DomainError("infinite length outside extended mode");
    }
}

bool LengthFunction::hasInfinite() const {
    return std::any_of(lengths_.begin(), lengths_.end(),
                       [](double v) { return std::isinf(v); });
}

std::vector<int> LengthFunction::finiteSupport() const {
    std::vector<int> s;
    for (int j = 0; j < n(); ++j)
        if (!std::isinf(lengths_[j]))
            s.push_back(j);
    return s;
}

LengthFunction LengthFunction::finiteRestriction() const {
    if (!hasInfinite())
        return *this;
    if (!graph_->isRose())
        throw DomainError("finite restriction is defined for roses only");
    std::vector<double> vals;
    for (double v : lengths_)
        if (!std::isinf(v))
            vals.push_back(v);
    if (vals.size() < 2)
        throw DegenerateError("fewer than 2 finite petals");
    const int m = static_cast<int>(vals.size());
    return LengthFunction(rose_graph(m), std::move(vals));
}

LengthFunction LengthFunction::scaled(double a) const {
    if (!(a > 0.0))
        throw DomainError("scale factor must be positive");
    std::vector<double> vals(lengths_);
    for (double& v : vals)
        v *= a;
    return LengthFunction(graph_, std::move(vals), extended_);
}

LengthFunction rose_lengths(std::vector<double> lengths, bool extended) {
    const int n = static_cast<int>(lengths.size());
    return LengthFunction(rose_graph(n), std::move(lengths), extended);
}

namespace {

constexpr BigCount kOverflowLimit = BigCount(1) << 120;

std::string count_to_string(BigCount v) {
    if (v == 0)
        return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

// Rose circuits counted by petal-usage composition.  A state is (last
// directed edge, how many edges of each petal were used); layers advance one
// edge at a time.  Every reachable state with last != reverse(first) is a
// circuit, since the closing incidence is automatic at the single vertex.
BigCount circuit_count_rose(const MetricGraph& g, std::span<const double> len,
                            double T, BigCount guard) {
    const int n = g.edgeCount();
    const int E = 2 * n;
    const double slack = T + 1e-12 * std::max(1.0, std::abs(T));

    std::vector<int> cap(n);
    std::size_t states = 1;
    for (int j = 0; j < n; ++j) {
        cap[j] = len[j] > slack ? 0 : static_cast<int>(slack / len[j]);
        states *= static_cast<std::size_t>(cap[j]) + 1;
        if (states > 50'000'000)
            throw TooLargeError("circuit count state space exceeds cap");
    }
    std::vector<std::size_t> stride(n);
    stride[0] = 1;
    for (int j = 1; j < n; ++j)
        stride[j] = stride[j - 1] * (static_cast<std::size_t>(cap[j - 1]) + 1);

    // composition -> total length, precomputed
    std::vector<double> total(states, 0.0);
    for (int j = 0; j < n; ++j) {
        const std::size_t period = stride[j] * (static_cast<std::size_t>(cap[j]) + 1);
        for (std::size_t idx = 0; idx < states; ++idx) {
            const std::size_t c = (idx % period) / stride[j];
            total[idx] += static_cast<double>(c) * len[j];
        }
    }

    BigCount circuits = 0;
    std::vector<BigCount> cur(states * E), nxt(states * E);
    for (int first = 0; first < E; ++first) {
        const int pj = MetricGraph::petal(first);
        if (cap[pj] == 0)
            continue;
        std::fill(cur.begin(), cur.end(), BigCount(0));
        cur[stride[pj] * E + first] = 1;
        // single-edge circuit: closure needs last != reverse(first); a lone
        // edge always satisfies it
        circuits += 1;

        bool alive = true;
        while (alive) {
            alive = false;
            std::fill(nxt.begin(), nxt.end(), BigCount(0));
            for (std::size_t idx = 0; idx < states; ++idx) {
                for (int e = 0; e < E; ++e) {
                    const BigCount c = cur[idx * E + e];
                    if (c == 0)
                        continue;
                    for (int ep = 0; ep < E; ++ep) {
                        if (ep == MetricGraph::reverse(e))
                            continue;
                        const int q = MetricGraph::petal(ep);
                        const std::size_t used = (idx / stride[q]) %
                                                 (static_cast<std::size_t>(cap[q]) + 1);
                        if (static_cast<int>(used) >= cap[q])
                            continue;
                        const std::size_t nidx = idx + stride[q];
                        if (total[nidx] > slack)
                            continue;
                        BigCount& cell = nxt[nidx * E + ep];
                        cell += c;
                        if (cell > kOverflowLimit)
                            throw TooLargeError("circuit count overflow");
                        alive = true;
                        if (ep != MetricGraph::reverse(first)) {
                            circuits += c;
                            if (circuits > guard)
                                throw TooLargeError("circuit count " +
                                                    count_to_string(circuits) +
                                                    "+ exceeds guard");
                        }
                    }
                }
            }
            cur.swap(nxt);
        }
    }
    return circuits;
}

struct DfsCounter {
    const MetricGraph& g;
    std::span<const double> len;
    double slack;
    BigCount guard;
    BigCount circuits = 0;
    unsigned long long visits = 0;
    int first = 0;

    void extend(int last, double used) {
        if (++visits > 64ull * 10'000'000ull)
            throw TooLargeError("circuit DFS work exceeds cap");
        for (int ep = 0; ep < g.dirEdgeCount(); ++ep) {
            if (!g.arc(last, ep))
                continue;
            const double t = used + len[MetricGraph::petal(ep)];
            if (t > slack)
                continue;
            if (g.terminus(ep) == g.origin(first) && ep != MetricGraph::reverse(first)) {
                if (++circuits > guard)
                    throw TooLargeError("circuit count exceeds guard");
            }
            extend(ep, t);
        }
    }
};

BigCount circuit_count_dfs(const MetricGraph& g, std::span<const double> len,
                           double T, BigCount guard) {
    const double slack = T + 1e-12 * std::max(1.0, std::abs(T));
    DfsCounter ctr{g, len, slack, guard};
    for (int first = 0; first < g.dirEdgeCount(); ++first) {
        const double l0 = len[MetricGraph::petal(first)];
        if (l0 > slack)
            continue;
        ctr.first = first;
        if (g.terminus(first) == g.origin(first)) {
            if (++ctr.circuits > guard)
                throw TooLargeError("circuit count exceeds guard");
        }
        ctr.extend(first, l0);
    }
    return ctr.circuits;
}

} // namespace

BigCount circuit_count(const MetricGraph& g, std::span<const double> lengths,
                       double T, BigCount guard) {
    if (static_cast<int>(lengths.size()) != g.edgeCount())
        throw DomainError("length vector size does not match |E+|");
    for (double v : lengths)
        if (!(v > 0.0) || std::isinf(v))
            throw DomainError("circuit counting needs finite positive lengths");
    if (T < 0.0)
        return 0;
    if (g.isRose())
        return circuit_count_rose(g, lengths, T, guard);
    return circuit_count_dfs(g, lengths, T, guard);
}

} // namespace shiftmetric
