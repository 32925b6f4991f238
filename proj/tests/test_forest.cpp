#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "dtm/forest.hpp"
#include "support.hpp"

using namespace dtm;
using test_support::Rng;

namespace {

/// Snapshot of a forest's shape keyed by handle: parent and ordered children.
std::map<NodeId, std::pair<NodeId, std::vector<NodeId>>> shape_of(const RootedForest& f) {
    std::map<NodeId, std::pair<NodeId, std::vector<NodeId>>> m;
    for (NodeId v : f.alive_nodes()) m[v] = {f.parent(v), f.children(v)};
    return m;
}

}  // namespace

TEST_CASE("build: path and star") {
    RootedForest path = RootedForest::build({kNoNode, 0, 1, 2, 3});
    CHECK(path.alive_count() == 5);
    CHECK(path.parent(4) == 3);
    CHECK(path.is_root(0));
    CHECK(path.is_leaf(4));

    RootedForest star = RootedForest::build({kNoNode, 0, 0, 0, 0});
    CHECK(star.children(0) == std::vector<NodeId>{1, 2, 3, 4});
    for (NodeId v = 1; v <= 4; ++v) CHECK(star.is_leaf(v));
}

TEST_CASE("build: bad input") {
    CHECK_THROWS_AS(RootedForest::build({0}), Error);        // self-parent cycle
    CHECK_THROWS_AS(RootedForest::build({1, 0}), Error);     // 2-cycle
    CHECK_THROWS_AS(RootedForest::build({kNoNode, 7}), Error);  // dangling parent
    // child order naming a non-child
    CHECK_THROWS_AS(RootedForest::build({kNoNode, 0}, {{}, {0}}), Error);
}

TEST_CASE("cut: basic shapes") {
    RootedForest f = RootedForest::build({kNoNode, 0, 1});
    f.cut(1);
    CHECK(f.is_root(1));
    CHECK(f.children(0).empty());
    CHECK(f.parent(2) == 1);

    RootedForest star = RootedForest::build({kNoNode, 0, 0, 0, 0});
    star.cut(3);
    CHECK(star.is_root(3));
    CHECK(star.children(0) == std::vector<NodeId>{1, 2, 4});

    CHECK_THROWS_AS(star.cut(0), Error);
    try {
        star.cut(0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IsRoot);
    }
}

TEST_CASE("split: chain middle separates the pieces") {
    RootedForest f = RootedForest::build({kNoNode, 0, 1});  // a=0 -> b=1 -> c=2
    auto [u1, u2] = f.split(1);
    CHECK_FALSE(f.alive(1));
    CHECK(f.parent(u1) == 0);
    CHECK(f.is_leaf(u1));
    CHECK(f.is_root(u2));
    CHECK(f.children(u2) == std::vector<NodeId>{2});
    CHECK(f.parent(2) == u2);
}

TEST_CASE("split: leaf and root just mint an isolated node") {
    RootedForest f = RootedForest::build({kNoNode, 0});
    auto [l1, l2] = f.split(1);  // leaf
    CHECK(f.parent(l1) == 0);
    CHECK(f.is_root(l2));
    CHECK(f.is_leaf(l2));

    auto [r1, r2] = f.split(0);  // root
    CHECK(f.is_root(r1));
    CHECK(f.is_leaf(r1));
    CHECK(f.is_root(r2));
    CHECK(f.children(r2) == std::vector<NodeId>{l1});

    CHECK_THROWS_AS(f.split(0), Error);  // retired handle
}

TEST_CASE("split preserves sibling position") {
    RootedForest f = RootedForest::build({kNoNode, 0, 0, 0}, {{1, 2, 3}, {}, {}, {}});
    auto [u1, u2] = f.split(2);
    CHECK(f.children(0) == std::vector<NodeId>{1, u1, 3});
    CHECK(f.is_root(u2));
}

TEST_CASE("split then contract reproduces the shape") {
    Rng rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(2, 24);
        const std::size_t n = nd(rng);
        auto parents = test_support::random_tree_parents(n, rng);
        RootedForest f = RootedForest::build(parents);
        auto before = shape_of(f);

        std::uniform_int_distribution<std::size_t> vd(0, n - 1);
        NodeId v = static_cast<NodeId>(vd(rng));
        NodeId vp = f.parent(v);
        auto vkids = f.children(v);
        auto [u1, u2] = f.split(v);

        // contract: u1 and u2 back into a single node; compare shapes modulo
        // the renaming v ~ {u1, u2}
        auto after = shape_of(f);
        std::map<NodeId, std::pair<NodeId, std::vector<NodeId>>> reconstructed;
        for (auto& [node, pc] : after) {
            if (node == u1 || node == u2) continue;
            auto [p, kids] = pc;
            if (p == u1 || p == u2) p = v;
            for (auto& k : kids)
                if (k == u1 || k == u2) k = v;
            reconstructed[node] = {p, kids};
        }
        // the merged node: parent from u1, children from u2
        auto kids2 = after[u2].second;
        reconstructed[v] = {after[u1].first, kids2};
        // u1 must sit exactly where v sat in its parent's child order
        CHECK(reconstructed == before);
        CHECK(after[u1].second.empty());
        CHECK(after[u2].first == kNoNode);
        CHECK(after[u1].first == vp);
        CHECK(kids2 == vkids);
    }
}

TEST_CASE("operation budgets over full demolition (fuzz)") {
    Rng rng(21);
    for (int iter = 0; iter < 60; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(2, 40);
        const std::size_t n = nd(rng);
        RootedForest f = RootedForest::build(test_support::random_tree_parents(n, rng));
        // random interleaving of cuts and splits until nothing is left to do
        std::size_t guard = 0;
        while (guard++ < 10 * n) {
            auto alive = f.alive_nodes();
            std::vector<NodeId> cuttable, splittable;
            for (NodeId v : alive) {
                if (!f.is_root(v)) cuttable.push_back(v);
                if (!f.is_root(v) && !f.is_leaf(v)) splittable.push_back(v);
            }
            if (cuttable.empty()) break;
            if (!splittable.empty() && (rng() & 1)) {
                f.split(splittable[rng() % splittable.size()]);
            } else {
                f.cut(cuttable[rng() % cuttable.size()]);
            }
        }
        CHECK(f.cuts_performed() <= n - 1);
        CHECK(f.inner_splits_performed() <= n - 2);
    }
}

TEST_CASE("graph: construction guards") {
    Graph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    CHECK_THROWS_AS(g.add_edge(2, 2), Error);
    CHECK_THROWS_AS(g.add_edge(0, 1), Error);
    CHECK_FALSE(g.connected());
    g.add_edge(2, 3);
    CHECK(g.connected());
}
