#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "dtm/path_engine.hpp"
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

struct MultisetUnion {
    using Value = std::multiset<int>;
    Value combine(const Value& a, const Value& b) const {
        Value out = a;
        out.insert(b.begin(), b.end());
        return out;
    }
};

std::vector<NodeId> path_parents(std::size_t n) {
    std::vector<NodeId> p(n, kNoNode);
    for (std::size_t v = 1; v < n; ++v) p[v] = static_cast<NodeId>(v - 1);
    return p;
}

}  // namespace

TEST_CASE("path dtm: single path scenarios") {
    // priorities (3,1,2) root-to-leaf: min is the middle node
    RootedForest f = RootedForest::build(path_parents(3));
    PriorityOracle o({3, 1, 2});
    PathDtm d(f, o);
    CHECK(d.tree_min(0) == 1);
    CHECK(d.tree_min(2) == 1);

    // (5,1,4,2,3): min = node 1; after cutting between positions 2|3 the
    // right part's min is node 3
    RootedForest g = RootedForest::build(path_parents(5));
    PriorityOracle o2({5, 1, 4, 2, 3});
    PathDtm d2(g, o2);
    CHECK(d2.tree_min(4) == 1);
    const auto before = o2.comparisons();
    d2.cut(3);
    CHECK(d2.tree_min(0) == 1);
    CHECK(d2.tree_min(4) == 3);
    CHECK(o2.comparisons() == before);  // queries and cuts are comparison-free
    CHECK_THROWS_AS(d2.cut(0), Error);
}

TEST_CASE("path dtm: forests and singletons") {
    // two disjoint paths: 0->1 and 2->3->4
    std::vector<NodeId> parents{kNoNode, 0, kNoNode, 2, 3};
    RootedForest f = RootedForest::build(parents);
    PriorityOracle o({4, 0, 3, 1, 2});
    PathDtm d(f, o);
    CHECK(d.tree_min(0) == 1);
    CHECK(d.tree_min(4) == 3);

    RootedForest s = RootedForest::build({kNoNode});
    PriorityOracle os({0});
    PathDtm ds(s, os);
    CHECK(ds.tree_min(0) == 0);
}

TEST_CASE("path dtm: rejects branching") {
    RootedForest f = RootedForest::build({kNoNode, 0, 0});
    PriorityOracle o({0, 1, 2});
    CHECK_THROWS_AS(PathDtm(f, o), Error);
}

TEST_CASE("path dtm: randomized equivalence with scan") {
    Rng rng(31);
    for (int iter = 0; iter < 50; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(1, 120);
        const std::size_t n = nd(rng);
        auto parents = path_parents(n);
        RootedForest f = RootedForest::build(parents);
        auto ranks = test_support::random_permutation(n, rng);
        PriorityOracle o(ranks);
        PathDtm d(f, o);
        std::vector<NodeId> ref = parents;
        for (std::size_t op = 0; op + 1 < n; ++op) {
            NodeId v = static_cast<NodeId>(rng() % n);
            CHECK(d.tree_min(v) == test_support::scan_min(ref, ranks, v));
            // cut a random non-root
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

TEST_CASE("path dtm: preprocessing comparisons stay linear") {
    // the stack construction performs at most 2n-3 comparisons; the ratio
    // settles just under 2 and never exceeds it
    for (std::size_t k = 8; k <= 16; k += 2) {
        const std::size_t n = std::size_t(1) << k;
        RootedForest f = RootedForest::build(path_parents(n));
        Rng rng(k);
        PriorityOracle o(test_support::random_permutation(n, rng));
        PathDtm d(f, o);
        const double ratio = static_cast<double>(o.comparisons()) / static_cast<double>(n);
        CHECK(ratio <= 2.0);
        // queries are free
        const auto before = o.comparisons();
        for (int q = 0; q < 100; ++q) d.tree_min(static_cast<NodeId>(rng() % n));
        CHECK(o.comparisons() == before);
    }
}

TEST_CASE("path sums: integers under +") {
    RootedForest f = RootedForest::build(path_parents(3));
    PathSemigroupSums<IntPlus> s(f, {1, 2, 3});
    CHECK(s.tree_sum(0) == 6);
    s.cut(2);  // split [0,1] | [2]
    CHECK(s.tree_sum(0) == 3);
    CHECK(s.tree_sum(2) == 3);
}

TEST_CASE("path sums: min semigroup matches PathDtm") {
    Rng rng(17);
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(1, 300);
        const std::size_t n = nd(rng);
        RootedForest f = RootedForest::build(path_parents(n));
        auto ranks = test_support::random_permutation(n, rng);
        PriorityOracle o(ranks);
        PathDtm d(f, o);
        RootedForest f2 = RootedForest::build(path_parents(n));
        std::vector<long long> weights(ranks.begin(), ranks.end());
        PathSemigroupSums<IntMin> s(f2, weights);
        std::vector<NodeId> ref = path_parents(n);
        for (std::size_t op = 0; op + 1 < n; ++op) {
            NodeId v = static_cast<NodeId>(rng() % n);
            NodeId dm = d.tree_min(v);
            CHECK(s.tree_sum(v) == ranks[static_cast<std::size_t>(dm)]);
            std::vector<NodeId> cuttable;
            for (std::size_t u = 0; u < n; ++u)
                if (ref[u] != kNoNode) cuttable.push_back(static_cast<NodeId>(u));
            if (cuttable.empty()) break;
            NodeId c = cuttable[rng() % cuttable.size()];
            d.cut(c);
            s.cut(c);
            ref[static_cast<std::size_t>(c)] = kNoNode;
        }
    }
}

TEST_CASE("path sums: multiset union semigroup") {
    RootedForest f = RootedForest::build(path_parents(4));
    std::vector<std::multiset<int>> w{{10}, {20}, {20}, {30}};
    PathSemigroupSums<MultisetUnion> s(f, w);
    CHECK(s.tree_sum(2) == std::multiset<int>{10, 20, 20, 30});
    s.cut(2);
    CHECK(s.tree_sum(0) == std::multiset<int>{10, 20});
    CHECK(s.tree_sum(3) == std::multiset<int>{20, 30});
}

TEST_CASE("path sums: block decomposition is minimal after every cut") {
    Rng rng(19);
    for (int iter = 0; iter < 30; ++iter) {
        std::uniform_int_distribution<std::size_t> nd(2, 200);
        const std::size_t n = nd(rng);
        RootedForest f = RootedForest::build(path_parents(n));
        std::vector<long long> w(n, 1);
        PathSemigroupSums<IntPlus> s(f, w);
        std::vector<NodeId> ref = path_parents(n);
        // a legal stored block is I_{p,q} intersected with [0, n)
        auto legal_block = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t p = 0; (std::size_t(1) << p) <= 2 * n; ++p) {
                const std::size_t len = std::size_t(1) << p;
                if (lo % len != 0) continue;
                if (std::min(lo + len - 1, n - 1) == hi) return true;
            }
            return false;
        };
        auto check_blocks = [&](NodeId v) {
            auto blocks = s.blocks_of(v);
            REQUIRE_FALSE(blocks.empty());
            for (std::size_t i = 0; i < blocks.size(); ++i) {
                auto [lo, hi] = blocks[i];
                CHECK(legal_block(lo, hi));
                if (i > 0) {
                    auto [plo, phi] = blocks[i - 1];
                    CHECK(phi + 1 == lo);
                    // minimality: adjacent blocks never merge into a legal one
                    CHECK_FALSE(legal_block(plo, hi));
                }
            }
        };
        for (std::size_t op = 0; op + 1 < n; ++op) {
            std::vector<NodeId> cuttable;
            for (std::size_t u = 0; u < n; ++u)
                if (ref[u] != kNoNode) cuttable.push_back(static_cast<NodeId>(u));
            if (cuttable.empty()) break;
            NodeId c = cuttable[rng() % cuttable.size()];
            s.cut(c);
            ref[static_cast<std::size_t>(c)] = kNoNode;
            check_blocks(c);
            check_blocks(test_support::walk_root(ref, static_cast<NodeId>(c > 0 ? c - 1 : 0)));
            // sums stay correct
            NodeId v = static_cast<NodeId>(rng() % n);
            auto comp = test_support::component_of(ref, v);
            CHECK(s.tree_sum(v) == static_cast<long long>(comp.size()));
        }
    }
}

TEST_CASE("path sums: deque amortization stays linear") {
    for (std::size_t k = 10; k <= 16; k += 3) {
        const std::size_t n = std::size_t(1) << k;
        RootedForest f = RootedForest::build(path_parents(n));
        std::vector<long long> w(n, 1);
        PathSemigroupSums<IntPlus> s(f, w);
        Rng rng(k);
        std::vector<NodeId> cuttable;
        for (std::size_t v = 1; v < n; ++v) cuttable.push_back(static_cast<NodeId>(v));
        std::shuffle(cuttable.begin(), cuttable.end(), rng);
        std::size_t ops = 0;
        for (NodeId c : cuttable) {
            s.cut(c);
            ++ops;
        }
        const double per_op = static_cast<double>(s.stack_ops()) / static_cast<double>(n + ops);
        CHECK(per_op <= 12.0);
    }
}
