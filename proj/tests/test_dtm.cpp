#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "dtm/dtm.hpp"
#include "support.hpp"

using namespace dtm;
using test_support::Rng;

namespace {

struct IntPlus {
    using Value = long long;
    Value combine(Value a, Value b) const { return a + b; }
};

struct IntMin {
    using Value = long long;
    Value combine(Value a, Value b) const { return std::min(a, b); }
};

std::vector<NodeId> path_parents(std::size_t n) {
    std::vector<NodeId> p(n, kNoNode);
    for (std::size_t v = 1; v < n; ++v) p[v] = static_cast<NodeId>(v - 1);
    return p;
}

std::vector<NodeId> star_parents(std::size_t n) {
    std::vector<NodeId> p(n, kNoNode);
    for (std::size_t v = 1; v < n; ++v) p[v] = 0;
    return p;
}

}  // namespace

TEST_CASE("uo dtm: compression shape examples") {
    Rng rng(1);
    {
        PriorityOracle o(test_support::random_permutation(8, rng));
        UoDtm d(RootedForest::build(path_parents(8)), o);
        CHECK(d.compression().super_forest().alive_count() == 1);
    }
    {
        PriorityOracle o(test_support::random_permutation(8, rng));
        UoDtm d(RootedForest::build(star_parents(8)), o);
        CHECK(d.compression().super_forest().alive_count() == 8);
    }
    {
        PriorityOracle o(test_support::random_permutation(7, rng));
        UoDtm d(RootedForest::build({kNoNode, 0, 0, 1, 1, 2, 2}), o);
        CHECK(d.compression().super_forest().alive_count() == 7);
    }
}

TEST_CASE("uo dtm: path scenarios") {
    RootedForest f = RootedForest::build(path_parents(4));
    PriorityOracle o({3, 0, 2, 1});
    UoDtm d(std::move(f), o);
    CHECK(d.tree_min(0) == 1);
    CHECK(d.tree_min(3) == 1);
    d.cut(2);
    CHECK(d.tree_min(0) == 1);
    CHECK(d.tree_min(3) == 3);
    CHECK_THROWS_AS(d.cut(0), Error);
}

TEST_CASE("uo dtm: star answers through the leaf sequence") {
    RootedForest f = RootedForest::build(star_parents(6));
    PriorityOracle o({5, 3, 1, 0, 2, 4});
    UoDtm d(std::move(f), o);
    CHECK(d.tree_min(0) == 3);
    d.cut(3);
    CHECK(d.tree_min(0) == 2);
    CHECK(d.tree_min(3) == 3);
    d.cut(2);
    CHECK(d.tree_min(0) == 4);
}

TEST_CASE("uo dtm: singleton component") {
    RootedForest f = RootedForest::build({kNoNode});
    PriorityOracle o({0});
    UoDtm d(std::move(f), o);
    CHECK(d.tree_min(0) == 0);
}

TEST_CASE("uo dtm: randomized equivalence against scan and naive") {
    Rng rng(101);
    for (int iter = 0; iter < 60; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(1, 150);
        const std::size_t n = nd(rng);
        auto parents = test_support::random_tree_parents(n, rng);
        auto ranks = test_support::random_permutation(n, rng);
        PriorityOracle o1(ranks), o2(ranks);
        UoDtm uo(RootedForest::build(parents), o1);
        NaiveDtm naive(RootedForest::build(parents), o2);
        std::vector<NodeId> ref = parents;
        for (int op = 0; op < 250; ++op) {
            NodeId v = static_cast<NodeId>(rng() % n);
            NodeId expect = test_support::scan_min(ref, ranks, v);
            CHECK(uo.tree_min(v) == expect);
            CHECK(naive.tree_min(v) == expect);
            std::vector<NodeId> cuttable;
            for (std::size_t u = 0; u < n; ++u)
                if (ref[u] != kNoNode) cuttable.push_back(static_cast<NodeId>(u));
            if (cuttable.empty()) break;
            NodeId c = cuttable[rng() % cuttable.size()];
            uo.cut(c);
            naive.cut(c);
            ref[static_cast<std::size_t>(c)] = kNoNode;
        }
    }
}

TEST_CASE("uo dtm: a query costs at most two comparisons") {
    Rng rng(111);
    for (int iter = 0; iter < 20; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(1, 200);
        const std::size_t n = nd(rng);
        auto parents = test_support::random_tree_parents(n, rng);
        PriorityOracle o(test_support::random_permutation(n, rng));
        UoDtm d(RootedForest::build(parents), o);
        std::vector<NodeId> ref = parents;
        for (int op = 0; op < 60; ++op) {
            const auto before = o.comparisons();
            d.tree_min(static_cast<NodeId>(rng() % n));
            CHECK(o.comparisons() - before <= 2);
            std::vector<NodeId> cuttable;
            for (std::size_t u = 0; u < n; ++u)
                if (ref[u] != kNoNode) cuttable.push_back(static_cast<NodeId>(u));
            if (cuttable.empty()) break;
            NodeId c = cuttable[rng() % cuttable.size()];
            d.cut(c);
            ref[static_cast<std::size_t>(c)] = kNoNode;
        }
    }
}

TEST_CASE("uo dtm: case accounting stays within the structural budget") {
    Rng rng(103);
    for (int iter = 0; iter < 20; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(2, 200);
        const std::size_t n = nd(rng);
        auto parents = test_support::random_tree_parents(n, rng);
        PriorityOracle o(test_support::random_permutation(n, rng));
        UoDtm d(RootedForest::build(parents), o);
        std::vector<NodeId> cuttable;
        for (std::size_t v = 1; v < n; ++v) cuttable.push_back(static_cast<NodeId>(v));
        std::shuffle(cuttable.begin(), cuttable.end(), rng);
        for (NodeId v : cuttable) d.cut(v);
        const auto& st = d.stats();
        CHECK(st.canonical_cuts + st.splits_of_inner <= 2 * d.initial_leaves());
    }
}

TEST_CASE("semigroup dtm: star of integers") {
    RootedForest f = RootedForest::build(star_parents(5));
    SemigroupDtm<IntPlus> d(std::move(f), {1, 2, 3, 4, 5});
    CHECK(d.tree_sum(0) == 15);
    d.cut(3);
    CHECK(d.tree_sum(0) == 11);
    CHECK(d.tree_sum(3) == 4);
}

TEST_CASE("semigroup dtm: min semigroup reproduces tree_min, sums conserve") {
    Rng rng(107);
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(1, 120);
        const std::size_t n = nd(rng);
        auto parents = test_support::random_tree_parents(n, rng);
        auto ranks = test_support::random_permutation(n, rng);
        PriorityOracle o(ranks);
        UoDtm mins(RootedForest::build(parents), o);
        std::vector<long long> w(ranks.begin(), ranks.end());
        SemigroupDtm<IntMin> smin(RootedForest::build(parents), w);
        std::vector<long long> ones(n, 1);
        SemigroupDtm<IntPlus> ssum(RootedForest::build(parents), ones);
        std::vector<NodeId> ref = parents;
        for (int op = 0; op < 150; ++op) {
            NodeId v = static_cast<NodeId>(rng() % n);
            NodeId mn = mins.tree_min(v);
            CHECK(smin.tree_sum(v) == ranks[static_cast<std::size_t>(mn)]);
            auto comp = test_support::component_of(ref, v);
            CHECK(ssum.tree_sum(v) == static_cast<long long>(comp.size()));
            std::vector<NodeId> cuttable;
            for (std::size_t u = 0; u < n; ++u)
                if (ref[u] != kNoNode) cuttable.push_back(static_cast<NodeId>(u));
            if (cuttable.empty()) break;
            NodeId c = cuttable[rng() % cuttable.size()];
            const long long before = ssum.tree_sum(c);
            mins.cut(c);
            smin.cut(c);
            ssum.cut(c);
            ref[static_cast<std::size_t>(c)] = kNoNode;
            // conservation: the two sides add up to the pre-cut sum
            const long long a = ssum.tree_sum(c);
            NodeId parent_side = parents[static_cast<std::size_t>(c)];
            const long long b = ssum.tree_sum(parent_side);
            CHECK(a + b == before);
        }
    }
}

TEST_CASE("edtm: path scenarios") {
    // path a=0 - b=1 - c=2 with edge priorities: ab(rank 2), bc(rank 1)
    RootedForest f = RootedForest::build(path_parents(3));
    std::vector<std::int64_t> edge_rank{-1, 2, 1};  // edge named by child
    Edtm d(f, edge_rank);
    CHECK(d.tree_min_edge(0) == 2);  // edge bc
    d.cut(1);                        // delete edge ab
    CHECK(d.tree_min_edge(0) == kNoNode);
    CHECK(d.tree_min_edge(1) == 2);
    CHECK(d.tree_min_edge(2) == 2);
}

TEST_CASE("edtm: randomized equivalence with edge scan") {
    Rng rng(109);
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(1, 100);
        const std::size_t n = nd(rng);
        auto parents = test_support::random_tree_parents(n, rng);
        auto edge_rank = test_support::random_permutation(n, rng);  // child-indexed
        RootedForest f = RootedForest::build(parents);
        Edtm d(f, edge_rank);
        std::vector<NodeId> ref = parents;
        auto scan_min_edge = [&](NodeId v) {
            NodeId rv = test_support::walk_root(ref, v);
            NodeId best = kNoNode;
            for (std::size_t u = 0; u < n; ++u) {
                if (ref[u] == kNoNode) continue;  // no edge above u
                if (test_support::walk_root(ref, static_cast<NodeId>(u)) != rv) continue;
                if (best == kNoNode || edge_rank[u] < edge_rank[static_cast<std::size_t>(best)])
                    best = static_cast<NodeId>(u);
            }
            return best;
        };
        for (int op = 0; op < 120; ++op) {
            NodeId v = static_cast<NodeId>(rng() % n);
            CHECK(d.tree_min_edge(v) == scan_min_edge(v));
            std::vector<NodeId> cuttable;
            for (std::size_t u = 0; u < n; ++u)
                if (ref[u] != kNoNode) cuttable.push_back(static_cast<NodeId>(u));
            if (cuttable.empty()) break;
            NodeId c = cuttable[rng() % cuttable.size()];
            d.cut(c);
            ref[static_cast<std::size_t>(c)] = kNoNode;
        }
    }
}

TEST_CASE("edge semigroup dtm: weights with identity") {
    RootedForest f = RootedForest::build(path_parents(4));
    std::vector<long long> edge_w{0, 10, 20, 30};
    EdgeSemigroupDtm<IntPlus> d(f, edge_w, 0);
    CHECK(d.tree_sum(0) == 60);
    d.cut(2);
    CHECK(d.tree_sum(0) == 10);
    CHECK(d.tree_sum(3) == 30);
}

TEST_CASE("uo dtm: forest-shaped initial input") {
    // two components: a path 0->1->2 and a star 3 with leaves 4,5
    std::vector<NodeId> parents{kNoNode, 0, 1, kNoNode, 3, 3};
    PriorityOracle o({5, 1, 3, 4, 0, 2});
    UoDtm d(RootedForest::build(parents), o);
    CHECK(d.tree_min(2) == 1);
    CHECK(d.tree_min(3) == 4);
    d.cut(4);
    CHECK(d.tree_min(3) == 5);
    CHECK(d.tree_min(4) == 4);
}
