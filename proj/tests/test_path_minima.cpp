#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dtm/path_minima.hpp"
#include "support.hpp"

using namespace dtm;
using test_support::Rng;

namespace {

Graph path_graph(std::size_t n) {
    Graph g(n);
    for (std::size_t v = 1; v < n; ++v) g.add_edge(static_cast<NodeId>(v - 1), static_cast<NodeId>(v));
    return g;
}

Graph random_tree(std::size_t n, Rng& rng) {
    Graph g(n);
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> d(0, v - 1);
        g.add_edge(static_cast<NodeId>(v), static_cast<NodeId>(d(rng)));
    }
    return g;
}

Graph random_connected(std::size_t n, std::size_t extra, Rng& rng) {
    Graph g = random_tree(n, rng);
    std::size_t added = 0, guard = 0;
    while (added < extra && guard++ < 20 * (extra + 1)) {
        NodeId u = static_cast<NodeId>(rng() % n);
        NodeId v = static_cast<NodeId>(rng() % n);
        if (u == v) continue;
        bool dup = false;
        for (auto [w, e] : g.neighbors(u))
            if (w == v) dup = true;
        if (dup) continue;
        g.add_edge(u, v);
        ++added;
    }
    return g;
}

/// Tree path between u and v by BFS (vertices inclusive).
std::vector<NodeId> tree_path(const Graph& g, NodeId u, NodeId v) {
    std::vector<NodeId> prev(g.vertex_count(), kNoNode);
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<NodeId> queue{u};
    seen[static_cast<std::size_t>(u)] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        NodeId a = queue[i];
        for (auto [b, e] : g.neighbors(a))
            if (!seen[static_cast<std::size_t>(b)]) {
                seen[static_cast<std::size_t>(b)] = 1;
                prev[static_cast<std::size_t>(b)] = a;
                queue.push_back(b);
            }
    }
    std::vector<NodeId> path;
    for (NodeId a = v; a != kNoNode; a = prev[static_cast<std::size_t>(a)]) path.push_back(a);
    if (path.back() != u) path.push_back(u);
    return path;
}

/// All simple paths between u and v (tiny graphs), for exhaustive bottleneck.
void all_paths(const Graph& g, NodeId cur, NodeId target, std::vector<char>& used, std::vector<NodeId>& acc,
               std::vector<std::vector<NodeId>>& out) {
    if (cur == target) {
        out.push_back(acc);
        return;
    }
    for (auto [w, e] : g.neighbors(cur)) {
        if (used[static_cast<std::size_t>(w)]) continue;
        used[static_cast<std::size_t>(w)] = 1;
        acc.push_back(w);
        all_paths(g, w, target, used, acc, out);
        acc.pop_back();
        used[static_cast<std::size_t>(w)] = 0;
    }
}

}  // namespace

TEST_CASE("path min: scenarios and scan equivalence") {
    Rng rng(301);
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(1, 200);
        const std::size_t n = nd(rng);
        Graph g = random_tree(n, rng);
        auto ranks = test_support::random_permutation(n, rng);
        PriorityOracle o(ranks);
        PathMinIndex ix(g, o);
        for (int q = 0; q < 30; ++q) {
            NodeId u = static_cast<NodeId>(rng() % n);
            NodeId v = static_cast<NodeId>(rng() % n);
            NodeId got = ix.path_min(u, v);
            auto path = tree_path(g, u, v);
            NodeId want = path[0];
            for (NodeId a : path)
                if (ranks[static_cast<std::size_t>(a)] < ranks[static_cast<std::size_t>(want)]) want = a;
            CHECK(got == want);
        }
        // u == v returns u
        NodeId u = static_cast<NodeId>(rng() % n);
        CHECK(ix.path_min(u, u) == u);
    }
}

TEST_CASE("path min: queries make zero comparisons") {
    Rng rng(307);
    const std::size_t n = 300;
    Graph g = random_tree(n, rng);
    auto ranks = test_support::random_permutation(n, rng);
    PriorityOracle o(ranks);
    PathMinIndex ix(g, o);
    const auto before = o.comparisons();
    for (int q = 0; q < 100000; ++q)
        ix.path_min(static_cast<NodeId>(rng() % n), static_cast<NodeId>(rng() % n));
    CHECK(o.comparisons() == before);
}

TEST_CASE("bottleneck: triangle example") {
    Graph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    PriorityOracle o({0, 1, 2});
    PathMinIndex ix = bottleneck_build(g, o);
    // paths 1-2 (bottleneck rank 1) vs 1-0-2 (bottleneck rank 0): best is 1
    CHECK(ix.path_min(1, 2) == 1);
}

TEST_CASE("bottleneck: exhaustive equivalence on small graphs") {
    Rng rng(311);
    for (int iter = 0; iter < 30; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(2, 9);
        const std::size_t n = nd(rng);
        Graph g = random_connected(n, rng() % (n + 2), rng);
        auto ranks = test_support::random_permutation(n, rng);
        PriorityOracle o(ranks);
        PathMinIndex ix = bottleneck_build(g, o);
        for (NodeId u = 0; u < static_cast<NodeId>(n); ++u) {
            for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
                if (u == v) continue;
                std::vector<std::vector<NodeId>> paths;
                std::vector<char> used(n, 0);
                std::vector<NodeId> acc{u};
                used[static_cast<std::size_t>(u)] = 1;
                all_paths(g, u, v, used, acc, paths);
                std::int64_t best = -1;
                for (const auto& p : paths) {
                    std::int64_t mn = INT64_MAX;
                    for (NodeId a : p) mn = std::min(mn, ranks[static_cast<std::size_t>(a)]);
                    best = std::max(best, mn);
                }
                CHECK(ranks[static_cast<std::size_t>(ix.path_min(u, v))] == best);
            }
        }
    }
}

TEST_CASE("edge path min: single edge and short path") {
    {
        Graph g(2);
        g.add_edge(0, 1);
        PriorityOracle o;
        EdgePathMinIndex ix(g, {0}, o);
        CHECK(ix.path_min_edge(0, 1) == 0);
        CHECK(ix.path_min_edge(0, 0) == -1);
    }
    {
        Graph g = path_graph(4);
        PriorityOracle o;
        EdgePathMinIndex ix(g, {2, 0, 1}, o);
        CHECK(ix.path_min_edge(0, 3) == 1);
        CHECK(ix.path_min_edge(2, 3) == 2);
        CHECK(ix.path_min_edge(0, 1) == 0);
    }
}

TEST_CASE("edge path min: random trees against path scans") {
    Rng rng(313);
    for (int iter = 0; iter < 30; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(2, 120);
        const std::size_t n = nd(rng);
        Graph g = random_tree(n, rng);
        auto edge_rank = test_support::random_permutation(g.edge_count(), rng);
        PriorityOracle o;
        EdgePathMinIndex ix(g, edge_rank, o);
        for (int q = 0; q < 25; ++q) {
            NodeId u = static_cast<NodeId>(rng() % n);
            NodeId v = static_cast<NodeId>(rng() % n);
            if (u == v) continue;
            auto path = tree_path(g, u, v);
            // minimum-rank edge along the path
            std::int64_t best = INT64_MAX;
            EdgeId beste = -1;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                for (auto [w, e] : g.neighbors(path[i]))
                    if (w == path[i + 1] && edge_rank[static_cast<std::size_t>(e)] < best) {
                        best = edge_rank[static_cast<std::size_t>(e)];
                        beste = e;
                    }
            }
            CHECK(ix.path_min_edge(u, v) == beste);
        }
    }
}

TEST_CASE("edge bottleneck: exhaustive equivalence on small graphs") {
    Rng rng(317);
    for (int iter = 0; iter < 25; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(2, 8);
        const std::size_t n = nd(rng);
        Graph g = random_connected(n, rng() % (n + 2), rng);
        auto edge_rank = test_support::random_permutation(g.edge_count(), rng);
        PriorityOracle o;
        EdgeBottleneckIndex ix(g, edge_rank, o);
        auto edge_on = [&](NodeId a, NodeId b) {
            for (auto [w, e] : g.neighbors(a))
                if (w == b) return e;
            return EdgeId(-1);
        };
        for (NodeId u = 0; u < static_cast<NodeId>(n); ++u) {
            for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
                if (u == v) continue;
                std::vector<std::vector<NodeId>> paths;
                std::vector<char> used(n, 0);
                std::vector<NodeId> acc{u};
                used[static_cast<std::size_t>(u)] = 1;
                all_paths(g, u, v, used, acc, paths);
                std::int64_t best = -1;
                for (const auto& p : paths) {
                    std::int64_t mn = INT64_MAX;
                    for (std::size_t i = 0; i + 1 < p.size(); ++i)
                        mn = std::min(mn, edge_rank[static_cast<std::size_t>(edge_on(p[i], p[i + 1]))]);
                    best = std::max(best, mn);
                }
                EdgeId got = ix.bottleneck_edge(u, v);
                CHECK(edge_rank[static_cast<std::size_t>(got)] == best);
            }
        }
    }
}

TEST_CASE("reconstruct elimination tree from queries alone") {
    Rng rng(331);
    for (int iter = 0; iter < 20; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(1, 40);
        const std::size_t n = nd(rng);
        Graph g = random_tree(n, rng);
        auto ranks = test_support::random_permutation(n, rng);
        PriorityOracle o(ranks);
        PathMinIndex ix(g, o);
        const auto before = o.comparisons();
        EliminationTree rebuilt = reconstruct_et_via_queries(ix, g);
        CHECK(o.comparisons() == before);  // zero additional comparisons
        CHECK(rebuilt == brute_force_cartesian(g, ranks));
    }
}
