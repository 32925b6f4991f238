#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/dtm.hpp"
#include "dtm/entropy.hpp"
#include "dtm/forest.hpp"
#include "dtm/oracle.hpp"

namespace dtm {

/// Rooted tree over the vertices of a graph (or vertices plus edges for the
/// edge-partition variant), with ordered children in discovery order.
struct EliminationTree {
    enum class NodeKind : std::uint8_t { Vertex, Edge };
    std::vector<NodeId> parent;           // indexed by tree node id
    std::vector<std::vector<NodeId>> children;
    std::vector<NodeKind> kind;
    NodeId root = kNoNode;

    std::size_t size() const { return parent.size(); }

    bool operator==(const EliminationTree& other) const {
        return parent == other.parent && root == other.root && kind == other.kind;
    }
};

/// Heap trace of one Dijkstra-Jarnik-Prim run: insertion and deletion
/// timestamps per vertex (timestamp = number of inserts so far).
struct DjpTrace {
    std::vector<std::int64_t> insert_ts;
    std::vector<std::int64_t> delete_ts;

    /// Reported diagnostic: sum over vertices of log2(t_x - s_x), with gaps
    /// of zero contributing nothing.
    double sum_log() const {
        double s = 0;
        for (std::size_t i = 0; i < insert_ts.size(); ++i) {
            const double gap = static_cast<double>(delete_ts[i] - insert_ts[i]);
            if (gap >= 1) s += std::log2(gap);
        }
        return s;
    }
};

/// Binary heap with decrease-to-better handles; the default plug for the
/// spanning tree stage. A timestamp-optimal (working-set) heap can be
/// substituted through the same interface.
template <class Better>
class BinaryHeap {
public:
    explicit BinaryHeap(std::size_t n, Better better) : better_(better), pos_(n, -1) {}

    bool empty() const { return heap_.empty(); }
    bool contains(NodeId v) const { return pos_[static_cast<std::size_t>(v)] >= 0; }

    void insert(NodeId v) {
        pos_[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(heap_.size());
        heap_.push_back(v);
        sift_up(heap_.size() - 1);
    }

    /// The key of v improved; restore the heap property.
    void promote(NodeId v) { sift_up(static_cast<std::size_t>(pos_[static_cast<std::size_t>(v)])); }

    NodeId pop_best() {
        NodeId top = heap_[0];
        swap_at(0, heap_.size() - 1);
        heap_.pop_back();
        pos_[static_cast<std::size_t>(top)] = -1;
        if (!heap_.empty()) sift_down(0);
        return top;
    }

private:
    void sift_up(std::size_t i) {
        while (i > 0) {
            std::size_t p = (i - 1) / 2;
            if (!better_(heap_[i], heap_[p])) break;
            swap_at(i, p);
            i = p;
        }
    }
    void sift_down(std::size_t i) {
        for (;;) {
            std::size_t l = 2 * i + 1, r = 2 * i + 2, best = i;
            if (l < heap_.size() && better_(heap_[l], heap_[best])) best = l;
            if (r < heap_.size() && better_(heap_[r], heap_[best])) best = r;
            if (best == i) break;
            swap_at(i, best);
            i = best;
        }
    }
    void swap_at(std::size_t a, std::size_t b) {
        std::swap(heap_[a], heap_[b]);
        pos_[static_cast<std::size_t>(heap_[a])] = static_cast<std::int64_t>(a);
        pos_[static_cast<std::size_t>(heap_[b])] = static_cast<std::int64_t>(b);
    }

    Better better_;
    std::vector<NodeId> heap_;
    std::vector<std::int64_t> pos_;
};

/// Cartesian tree on a tree: root the input anywhere, run the decremental
/// structure, and peel minima: find the component minimum, make it the next
/// tree node, and delete its incident edges. At most 2n operations.
inline EliminationTree cartesian_on_tree(const Graph& g, PriorityOracle& oracle) {
    const std::size_t n = g.vertex_count();
    if (!g.connected()) raise(Errc::Disconnected, "input graph must be connected");
    if (n > 0 && g.edge_count() != n - 1) raise(Errc::BadParams, "input graph is not a tree");
    EliminationTree out;
    out.parent.assign(n, kNoNode);
    out.children.assign(n, {});
    out.kind.assign(n, EliminationTree::NodeKind::Vertex);
    if (n == 0) return out;
    if (n == 1) {
        out.root = 0;
        return out;
    }

    // root the tree at vertex 0 (iterative BFS rooting)
    std::vector<NodeId> parents(n, kNoNode);
    {
        std::vector<char> seen(n, 0);
        std::vector<NodeId> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (auto [w, e] : g.neighbors(v)) {
                if (seen[static_cast<std::size_t>(w)]) continue;
                seen[static_cast<std::size_t>(w)] = 1;
                parents[static_cast<std::size_t>(w)] = v;
                stack.push_back(w);
            }
        }
    }
    RootedForest f = RootedForest::build(parents);
    // track current neighbors to identify the components after removal
    std::vector<NodeId> cur_parent = parents;
    std::vector<std::vector<NodeId>> cur_children(n);
    for (std::size_t v = 0; v < n; ++v)
        if (parents[v] != kNoNode) cur_children[static_cast<std::size_t>(parents[v])].push_back(static_cast<NodeId>(v));

    UoDtm dtm(std::move(f), oracle);

    // worklist of (component representative, parent in the output tree)
    std::vector<std::pair<NodeId, NodeId>> work{{0, kNoNode}};
    while (!work.empty()) {
        auto [rep, ind_parent] = work.back();
        work.pop_back();
        NodeId m = dtm.tree_min(rep);
        out.parent[static_cast<std::size_t>(m)] = ind_parent;
        if (ind_parent == kNoNode)
            out.root = m;
        else
            out.children[static_cast<std::size_t>(ind_parent)].push_back(m);
        // delete all edges incident to m; recurse on each neighbor component
        for (NodeId c : cur_children[static_cast<std::size_t>(m)]) {
            dtm.cut(c);
            cur_parent[static_cast<std::size_t>(c)] = kNoNode;
            work.emplace_back(c, m);
        }
        cur_children[static_cast<std::size_t>(m)].clear();
        NodeId p = cur_parent[static_cast<std::size_t>(m)];
        if (p != kNoNode) {
            dtm.cut(m);
            auto& pc = cur_children[static_cast<std::size_t>(p)];
            pc.erase(std::find(pc.begin(), pc.end(), m));
            cur_parent[static_cast<std::size_t>(m)] = kNoNode;
            work.emplace_back(p, m);
        }
    }
    return out;
}

/// Maximum spanning tree by Dijkstra-Jarnik-Prim from s, with a pluggable
/// heap (HeapMaker(n, better) -> heap). Edge weights are compared through
/// `better(e1, e2)` = e1 strictly preferable. Fills a timestamp trace.
template <class EdgeBetter, class HeapMaker>
std::pair<std::vector<EdgeId>, DjpTrace> djp_max_spanning_tree(const Graph& g, NodeId s, EdgeBetter edge_better,
                                                               HeapMaker make_heap) {
    const std::size_t n = g.vertex_count();
    if (!g.connected()) raise(Errc::Disconnected, "spanning tree of a disconnected graph");
    DjpTrace trace;
    trace.insert_ts.assign(n, 0);
    trace.delete_ts.assign(n, 0);
    std::vector<EdgeId> best_edge(n, -1);  // current best connecting edge per fringe vertex
    std::vector<char> visited(n, 0);

    auto vertex_better = [&](NodeId a, NodeId b) {
        return edge_better(best_edge[static_cast<std::size_t>(a)], best_edge[static_cast<std::size_t>(b)]);
    };
    auto heap = make_heap(n, vertex_better);

    std::int64_t inserts = 0;
    std::vector<EdgeId> tree_edges;
    ++inserts;
    trace.insert_ts[static_cast<std::size_t>(s)] = inserts;
    heap.insert(s);
    while (!heap.empty()) {
        NodeId u = heap.pop_best();
        trace.delete_ts[static_cast<std::size_t>(u)] = inserts;
        visited[static_cast<std::size_t>(u)] = 1;
        if (best_edge[static_cast<std::size_t>(u)] >= 0) tree_edges.push_back(best_edge[static_cast<std::size_t>(u)]);
        for (auto [w, e] : g.neighbors(u)) {
            if (visited[static_cast<std::size_t>(w)]) continue;
            if (!heap.contains(w)) {
                best_edge[static_cast<std::size_t>(w)] = e;
                ++inserts;
                trace.insert_ts[static_cast<std::size_t>(w)] = inserts;
                heap.insert(w);
            } else if (edge_better(e, best_edge[static_cast<std::size_t>(w)])) {
                best_edge[static_cast<std::size_t>(w)] = e;
                heap.promote(w);
            }
        }
    }
    return {tree_edges, trace};
}

/// Cartesian tree on a connected graph: weigh each edge by the smaller
/// endpoint priority, take the maximum spanning tree, and build the
/// Cartesian tree on it. The last trace is kept for diagnostics.
inline EliminationTree cartesian_on_graph(const Graph& g, PriorityOracle& oracle, DjpTrace* trace_out = nullptr) {
    const std::size_t n = g.vertex_count();
    if (!g.connected()) raise(Errc::Disconnected, "input graph must be connected");
    if (n <= 1 || g.edge_count() == n - 1) {
        if (trace_out) *trace_out = DjpTrace{};
        return cartesian_on_tree(g, oracle);
    }
    // w_min(e) = min(p(u), p(v)), one comparison per edge
    std::vector<PriorityRef> wmin(g.edge_count());
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        auto [u, v] = g.edge(static_cast<EdgeId>(i));
        wmin[i] = oracle.less(oracle.ref(u), oracle.ref(v)) ? oracle.ref(u) : oracle.ref(v);
    }
    // maximum spanning tree w.r.t. w_min, ties by edge id
    auto edge_better = [&](EdgeId a, EdgeId b) {
        if (oracle.less(wmin[static_cast<std::size_t>(b)], wmin[static_cast<std::size_t>(a)])) return true;
        if (oracle.less(wmin[static_cast<std::size_t>(a)], wmin[static_cast<std::size_t>(b)])) return false;
        return a < b;
    };
    auto [edges, trace] = djp_max_spanning_tree(g, 0, edge_better, [](std::size_t nn, auto better) {
        return BinaryHeap<decltype(better)>(nn, better);
    });
    if (trace_out) *trace_out = trace;
    Graph h(n);
    for (EdgeId e : edges) {
        auto [u, v] = g.edge(e);
        h.add_edge(u, v);
    }
    return cartesian_on_tree(h, oracle);
}

/// Cartesian edge-partition tree via edge subdivision: carriers take the
/// edge priorities, original vertices take ordered sentinels, and the result
/// maps back (carrier -> edge as inner node, vertex -> leaf).
/// Tree node ids: 0..n-1 are vertices, n+e is edge e. The caller passes a
/// fresh oracle, which this function configures; its counter then reports
/// the pipeline's comparisons.
inline EliminationTree ept_on_graph(const Graph& g, const std::vector<std::int64_t>& edge_rank,
                                    PriorityOracle& sub_oracle, DjpTrace* trace_out = nullptr) {
    const std::size_t n = g.vertex_count();
    const std::size_t m = g.edge_count();
    if (!g.connected()) raise(Errc::Disconnected, "input graph must be connected");
    Graph sub(n + m);
    for (std::size_t e = 0; e < m; ++e) {
        auto [u, v] = g.edge(static_cast<EdgeId>(e));
        sub.add_edge(u, static_cast<NodeId>(n + e));
        sub.add_edge(static_cast<NodeId>(n + e), v);
    }
    for (std::size_t v = 0; v < n; ++v) sub_oracle.assign_vertex_sentinel(static_cast<NodeId>(v), static_cast<std::int64_t>(v));
    for (std::size_t e = 0; e < m; ++e) sub_oracle.assign_finite(static_cast<NodeId>(n + e), edge_rank[e]);
    EliminationTree t = cartesian_on_graph(sub, sub_oracle, trace_out);
    for (std::size_t i = 0; i < t.size(); ++i)
        t.kind[i] = i < n ? EliminationTree::NodeKind::Vertex : EliminationTree::NodeKind::Edge;
    return t;
}

/// Heap-order and subtree-connectivity validation of an elimination tree.
inline bool elimination_tree_valid(const Graph& g, const EliminationTree& t,
                                   const std::function<bool(NodeId, NodeId)>& rank_less) {
    const std::size_t n = t.size();
    if (n == 0) return true;
    // heap order along tree edges
    for (std::size_t v = 0; v < n; ++v) {
        NodeId p = t.parent[v];
        if (p != kNoNode && !rank_less(p, static_cast<NodeId>(v))) return false;
    }
    // each subtree's vertex set must induce a connected subgraph
    std::vector<std::vector<NodeId>> subtree(n);
    {
        // children lists from parent[]
        std::vector<std::vector<NodeId>> kids(n);
        for (std::size_t v = 0; v < n; ++v)
            if (t.parent[v] != kNoNode) kids[static_cast<std::size_t>(t.parent[v])].push_back(static_cast<NodeId>(v));
        std::vector<std::pair<NodeId, bool>> stack{{t.root, false}};
        while (!stack.empty()) {
            auto [v, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                subtree[static_cast<std::size_t>(v)].push_back(v);
                for (NodeId c : kids[static_cast<std::size_t>(v)]) {
                    auto& sv = subtree[static_cast<std::size_t>(v)];
                    auto& sc = subtree[static_cast<std::size_t>(c)];
                    sv.insert(sv.end(), sc.begin(), sc.end());
                }
                continue;
            }
            stack.push_back({v, true});
            for (NodeId c : kids[static_cast<std::size_t>(v)]) stack.push_back({c, false});
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        const auto& set = subtree[v];
        if (set.empty()) return false;  // unreachable from root
        std::vector<char> in(n, 0);
        for (NodeId w : set) in[static_cast<std::size_t>(w)] = 1;
        std::vector<NodeId> stack{static_cast<NodeId>(v)};
        std::vector<char> seen(n, 0);
        seen[v] = 1;
        std::size_t cnt = 1;
        while (!stack.empty()) {
            NodeId a = stack.back();
            stack.pop_back();
            for (auto [b, e] : g.neighbors(a)) {
                if (!in[static_cast<std::size_t>(b)] || seen[static_cast<std::size_t>(b)]) continue;
                seen[static_cast<std::size_t>(b)] = 1;
                ++cnt;
                stack.push_back(b);
            }
        }
        if (cnt != set.size()) return false;
    }
    return true;
}

/// Exact |ET(G)| by recursive enumeration with bitmask memoization (n <= 20).
inline BigInt count_elimination_trees(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n > 20) raise(Errc::TooLarge, "elimination tree counting needs n <= 20");
    if (n == 0) return 1;
    std::vector<BigInt> memo(std::size_t(1) << n, -1);
    // count over connected vertex sets; disconnected sets are never queried
    std::function<BigInt(std::uint32_t)> count = [&](std::uint32_t mask) -> BigInt {
        if (__builtin_popcount(mask) <= 1) return 1;
        BigInt& m = memo[mask];
        if (m >= 0) return m;
        BigInt total = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (!(mask & (1u << v))) continue;
            const std::uint32_t rest = mask & ~(1u << v);
            // decompose rest into connected components within rest
            BigInt prod = 1;
            std::uint32_t remaining = rest;
            while (remaining) {
                std::uint32_t comp = 0;
                std::vector<NodeId> stack{static_cast<NodeId>(__builtin_ctz(remaining))};
                comp |= (1u << __builtin_ctz(remaining));
                while (!stack.empty()) {
                    NodeId a = stack.back();
                    stack.pop_back();
                    for (auto [b, e] : g.neighbors(a)) {
                        const std::uint32_t bit = 1u << b;
                        if (!(remaining & bit) || (comp & bit)) continue;
                        comp |= bit;
                        stack.push_back(b);
                    }
                }
                prod *= count(comp);
                remaining &= ~comp;
            }
            total += prod;
        }
        m = total;
        return m;
    };
    std::uint32_t all = n == 32 ? 0xffffffffu : ((1u << n) - 1);
    return count(all);
}

/// Brute-force Cartesian tree from explicit ranks (test oracle style):
/// recursive minimum-root construction over connected subgraphs.
inline EliminationTree brute_force_cartesian(const Graph& g, const std::vector<std::int64_t>& rank) {
    const std::size_t n = g.vertex_count();
    if (!g.connected()) raise(Errc::Disconnected, "input graph must be connected");
    EliminationTree out;
    out.parent.assign(n, kNoNode);
    out.children.assign(n, {});
    out.kind.assign(n, EliminationTree::NodeKind::Vertex);
    if (n == 0) return out;
    // worklist of (vertex set, output parent)
    std::vector<std::pair<std::vector<NodeId>, NodeId>> work;
    std::vector<NodeId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<NodeId>(i);
    work.emplace_back(all, kNoNode);
    while (!work.empty()) {
        auto [set, ind_parent] = std::move(work.back());
        work.pop_back();
        NodeId m = set[0];
        for (NodeId v : set)
            if (rank[static_cast<std::size_t>(v)] < rank[static_cast<std::size_t>(m)]) m = v;
        out.parent[static_cast<std::size_t>(m)] = ind_parent;
        if (ind_parent == kNoNode)
            out.root = m;
        else
            out.children[static_cast<std::size_t>(ind_parent)].push_back(m);
        // components of set minus m
        std::vector<char> in(n, 0);
        for (NodeId v : set) in[static_cast<std::size_t>(v)] = 1;
        in[static_cast<std::size_t>(m)] = 0;
        std::vector<char> seen(n, 0);
        for (NodeId v : set) {
            if (v == m || seen[static_cast<std::size_t>(v)] || !in[static_cast<std::size_t>(v)]) continue;
            std::vector<NodeId> comp;
            std::vector<NodeId> stack{v};
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
