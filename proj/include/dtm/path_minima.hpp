#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "dtm/cartesian.hpp"
#include "dtm/core.hpp"
#include "dtm/detail/lca.hpp"
#include "dtm/forest.hpp"
#include "dtm/oracle.hpp"

namespace dtm {

/// Static path-minimum index over a vertex-prioritized tree: the Cartesian
/// tree plus a comparison-free LCA structure over it. Queries never touch
/// the oracle.
class PathMinIndex {
public:
    /// Builds for a connected tree.
    PathMinIndex(const Graph& tree, PriorityOracle& oracle)
        : et_(cartesian_on_tree(tree, oracle)), lca_(et_.parent) {}

    /// Index built on a precomputed elimination tree (bottleneck reduction).
    explicit PathMinIndex(EliminationTree et) : et_(std::move(et)), lca_(et_.parent) {}

    /// Minimum-priority vertex on the tree path between u and v.
    NodeId path_min(NodeId u, NodeId v) const { return lca_.lca(u, v); }

    const EliminationTree& elimination_tree() const { return et_; }

private:
    EliminationTree et_;
    detail::EulerTourLca lca_;
};

/// Bottleneck-vertex index over a connected graph: maximum spanning tree
/// w.r.t. the smaller endpoint priority, then a path-minimum index on it.
inline PathMinIndex bottleneck_build(const Graph& g, PriorityOracle& oracle) {
    if (!g.connected()) raise(Errc::Disconnected, "bottleneck index needs a connected graph");
    const std::size_t n = g.vertex_count();
    if (n <= 1 || g.edge_count() == n - 1) return PathMinIndex(g, oracle);
    std::vector<PriorityRef> wmin(g.edge_count());
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        auto [u, v] = g.edge(static_cast<EdgeId>(i));
        wmin[i] = oracle.less(oracle.ref(u), oracle.ref(v)) ? oracle.ref(u) : oracle.ref(v);
    }
    auto edge_better = [&](EdgeId a, EdgeId b) {
        if (oracle.less(wmin[static_cast<std::size_t>(b)], wmin[static_cast<std::size_t>(a)])) return true;
        if (oracle.less(wmin[static_cast<std::size_t>(a)], wmin[static_cast<std::size_t>(b)])) return false;
        return a < b;
    };
    auto [edges, trace] = djp_max_spanning_tree(g, 0, edge_better, [](std::size_t nn, auto better) {
        return BinaryHeap<decltype(better)>(nn, better);
    });
    Graph h(n);
    for (EdgeId e : edges) {
        auto [u, v] = g.edge(e);
        h.add_edge(u, v);
    }
    return PathMinIndex(h, oracle);
}

/// Edge-weighted path-minimum index over a tree: the Cartesian EPT plus the
/// comparison-free LCA. Queries return the original-graph edge id, or -1 for
/// u == v.
class EdgePathMinIndex {
public:
    EdgePathMinIndex(const Graph& tree, const std::vector<std::int64_t>& edge_rank, PriorityOracle& sub_oracle)
        : n_(tree.vertex_count()), et_(ept_on_graph(tree, edge_rank, sub_oracle)), lca_(et_.parent) {}

    explicit EdgePathMinIndex(EliminationTree ept, std::size_t n_vertices)
        : n_(n_vertices), et_(std::move(ept)), lca_(et_.parent) {}

    /// Minimum-priority edge on the tree path between u and v.
    EdgeId path_min_edge(NodeId u, NodeId v) const {
        if (u == v) return -1;
        NodeId a = lca_.lca(u, v);
        return static_cast<EdgeId>(a - static_cast<NodeId>(n_));
    }

    const EliminationTree& ept() const { return et_; }

private:
    std::size_t n_;
    EliminationTree et_;
    detail::EulerTourLca lca_;
};

/// Edge-weighted bottleneck index: maximum spanning tree w.r.t. the edge
/// priorities themselves, then the EPT index on it. Query answers are edge
/// ids of the spanning tree graph; use `edge_of` to map to original ids.
class EdgeBottleneckIndex {
public:
    EdgeBottleneckIndex(const Graph& g, const std::vector<std::int64_t>& edge_rank, PriorityOracle& sub_oracle) {
        if (!g.connected()) raise(Errc::Disconnected, "bottleneck index needs a connected graph");
        const std::size_t n = g.vertex_count();
        std::vector<EdgeId> chosen;
        if (g.edge_count() + 1 == n || n <= 1) {
            for (std::size_t e = 0; e < g.edge_count(); ++e) chosen.push_back(static_cast<EdgeId>(e));
        } else {
            auto edge_better = [&](EdgeId a, EdgeId b) {
                // maximize the (distinct) edge ranks; larger rank = better
                auto ra = edge_rank[static_cast<std::size_t>(a)];
                auto rb = edge_rank[static_cast<std::size_t>(b)];
                return ra != rb ? ra > rb : a < b;
            };
            auto [edges, trace] = djp_max_spanning_tree(g, 0, edge_better, [](std::size_t nn, auto better) {
                return BinaryHeap<decltype(better)>(nn, better);
            });
            chosen = std::move(edges);
        }
        Graph h(n);
        std::vector<std::int64_t> h_rank;
        for (EdgeId e : chosen) {
            auto [u, v] = g.edge(e);
            h.add_edge(u, v);
            h_rank.push_back(edge_rank[static_cast<std::size_t>(e)]);
            original_.push_back(e);
        }
        ix_ = std::make_unique<EdgePathMinIndex>(h, h_rank, sub_oracle);
    }

    /// Bottleneck edge between u and v (id in the original graph), -1 if u==v.
    EdgeId bottleneck_edge(NodeId u, NodeId v) const {
        EdgeId e = ix_->path_min_edge(u, v);
        return e < 0 ? -1 : original_[static_cast<std::size_t>(e)];
    }

private:
    std::unique_ptr<EdgePathMinIndex> ix_;
    std::vector<EdgeId> original_;
};

/// Rebuilds the elimination tree from path-minimum queries alone (the
/// universality argument, executable): the minimum of each connected
/// subgraph is found by chaining path-min calls through its leaves.
inline EliminationTree reconstruct_et_via_queries(const PathMinIndex& ix, const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n > 2048) raise(Errc::TooLarge, "reconstruction is quadratic; keep it small");
    EliminationTree out;
    out.parent.assign(n, kNoNode);
    out.children.assign(n, {});
    out.kind.assign(n, EliminationTree::NodeKind::Vertex);
    if (n == 0) return out;
    std::vector<std::pair<std::vector<NodeId>, NodeId>> work;
    std::vector<NodeId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<NodeId>(i);
    work.emplace_back(all, kNoNode);
    while (!work.empty()) {
        auto [set, ind_parent] = std::move(work.back());
        work.pop_back();
        std::vector<char> in(n, 0);
        for (NodeId v : set) in[static_cast<std::size_t>(v)] = 1;
        // leaves of the induced subtree
        std::vector<NodeId> leaves;
        for (NodeId v : set) {
            std::size_t deg = 0;
            for (auto [w, e] : g.neighbors(v)) deg += in[static_cast<std::size_t>(w)] ? 1 : 0;
            if (deg <= 1) leaves.push_back(v);
        }
        NodeId cur = set[0];
        for (NodeId leaf : leaves) cur = ix.path_min(leaf, cur);
        NodeId m = cur;
        out.parent[static_cast<std::size_t>(m)] = ind_parent;
        if (ind_parent == kNoNode)
            out.root = m;
        else
            out.children[static_cast<std::size_t>(ind_parent)].push_back(m);
        in[static_cast<std::size_t>(m)] = 0;
        std::vector<char> seen(n, 0);
        for (NodeId v : set) {
            if (v == m || seen[static_cast<std::size_t>(v)] || !in[static_cast<std::size_t>(v)]) continue;
            std::vector<NodeId> comp, stack{v};
            seen[static_cast<std::size_t>(v)] = 1;
            while (!stack.empty()) {
                NodeId a = stack.back();
                stack.pop_back();
                comp.push_back(a);
                for (auto [b, e] : g.neighbors(a))
                    if (in[static_cast<std::size_t>(b)] && !seen[static_cast<std::size_t>(b)]) {
                        seen[static_cast<std::size_t>(b)] = 1;
                        stack.push_back(b);
                    }
            }
            work.emplace_back(std::move(comp), m);
        }
    }
    return out;
}

}  // namespace dtm
