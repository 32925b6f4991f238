#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/forest.hpp"

namespace test_support {

using dtm::kNoNode;
using dtm::NodeId;
using Rng = std::mt19937_64;

/// Reference component membership by parent walks.
inline NodeId walk_root(const std::vector<NodeId>& parent, NodeId v) {
    while (parent[static_cast<std::size_t>(v)] != kNoNode) v = parent[static_cast<std::size_t>(v)];
    return v;
}

/// Scan the component of v for the minimum rank.
inline NodeId scan_min(const std::vector<NodeId>& parent, const std::vector<std::int64_t>& rank, NodeId v) {
    NodeId rv = walk_root(parent, v);
    NodeId best = kNoNode;
    for (std::size_t u = 0; u < parent.size(); ++u) {
        if (walk_root(parent, static_cast<NodeId>(u)) != rv) continue;
        if (best == kNoNode || rank[u] < rank[static_cast<std::size_t>(best)]) best = static_cast<NodeId>(u);
    }
    return best;
}

inline std::vector<NodeId> component_of(const std::vector<NodeId>& parent, NodeId v) {
    NodeId rv = walk_root(parent, v);
    std::vector<NodeId> out;
    for (std::size_t u = 0; u < parent.size(); ++u)
        if (walk_root(parent, static_cast<NodeId>(u)) == rv) out.push_back(static_cast<NodeId>(u));
    return out;
}

inline std::vector<std::int64_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::int64_t> r(n);
    std::iota(r.begin(), r.end(), 0);
    std::shuffle(r.begin(), r.end(), rng);
    return r;
}

inline std::vector<NodeId> random_tree_parents(std::size_t n, Rng& rng) {
    std::vector<NodeId> p(n, kNoNode);
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> d(0, v - 1);
        p[v] = static_cast<NodeId>(d(rng));
    }
    return p;
}

/// All rooted tree shapes on exactly n nodes, as parent vectors (parents
/// precede children in index order). Enumerated by composing root subtree
/// multisets from a canonical catalog, deduplicated by canonical encodings.
std::vector<std::vector<NodeId>> all_rooted_trees(std::size_t n);

/// Canonical string encoding of a rooted tree (children sorted recursively).
inline std::string canonical_encoding(const std::vector<NodeId>& parent, NodeId root) {
    const std::size_t n = parent.size();
    std::vector<std::vector<NodeId>> kids(n);
    for (std::size_t v = 0; v < n; ++v)
        if (parent[v] != kNoNode) kids[static_cast<std::size_t>(parent[v])].push_back(static_cast<NodeId>(v));
    // iterative post-order with sorting of child encodings
    std::vector<std::string> enc(n);
    std::vector<std::pair<NodeId, bool>> stack{{root, false}};
    while (!stack.empty()) {
        auto [v, expanded] = stack.back();
        stack.pop_back();
        if (!expanded) {
            stack.push_back({v, true});
            for (NodeId c : kids[static_cast<std::size_t>(v)]) stack.push_back({c, false});
            continue;
        }
        std::vector<std::string> parts;
        for (NodeId c : kids[static_cast<std::size_t>(v)]) parts.push_back(enc[static_cast<std::size_t>(c)]);
        std::sort(parts.begin(), parts.end());
        std::string s = "(";
        for (const auto& p : parts) s += p;
        s += ")";
        enc[static_cast<std::size_t>(v)] = std::move(s);
    }
    return enc[static_cast<std::size_t>(root)];
}

}  // namespace test_support
