#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dtm/core.hpp"
#include "dtm/forest.hpp"

namespace dtm {

using BigInt = boost::multiprecision::cpp_int;

namespace detail_entropy {

inline std::vector<std::size_t> subtree_sizes(const RootedForest& t) {
    std::vector<std::size_t> size(t.capacity(), 0);
    for (NodeId r : t.roots()) {
        std::vector<std::pair<NodeId, bool>> stack{{r, false}};
        while (!stack.empty()) {
            auto [v, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                std::size_t s = 1;
                for (NodeId c : t.children(v)) s += size[static_cast<std::size_t>(c)];
                size[static_cast<std::size_t>(v)] = s;
                continue;
            }
            stack.push_back({v, true});
            for (NodeId c : t.children(v)) stack.push_back({c, false});
        }
    }
    return size;
}

inline double log2_big(const BigInt& x) {
    // exact enough for reporting: mantissa + exponent decomposition
    if (x <= 0) return -HUGE_VAL;
    const std::size_t bits = msb(x);
    if (bits <= 52) return std::log2(x.convert_to<double>());
    BigInt mant = x >> static_cast<unsigned>(bits - 52);
    return std::log2(mant.convert_to<double>()) + static_cast<double>(bits - 52);
}

}  // namespace detail_entropy

/// Tree entropy: sum over nodes of log2(n / |T_v|). The forest must be a
/// single rooted tree.
inline double tree_entropy(const RootedForest& t) {
    auto size = detail_entropy::subtree_sizes(t);
    const double n = static_cast<double>(t.alive_count());
    double h = 0;
    for (NodeId v : t.alive_nodes()) h += std::log2(n / static_cast<double>(size[static_cast<std::size_t>(v)]));
    return h;
}

/// Subset entropy: sum over v in S of log2(|S| / |V(T_v) ∩ S|).
inline double entropy_subset(const RootedForest& t, const std::vector<NodeId>& subset) {
    std::vector<char> in(t.capacity(), 0);
    for (NodeId v : subset) in[static_cast<std::size_t>(v)] = 1;
    // |T_v ∩ S| by a post-order accumulation
    std::vector<std::size_t> cnt(t.capacity(), 0);
    for (NodeId r : t.roots()) {
        std::vector<std::pair<NodeId, bool>> stack{{r, false}};
        while (!stack.empty()) {
            auto [v, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                std::size_t c = in[static_cast<std::size_t>(v)] ? 1 : 0;
                for (NodeId w : t.children(v)) c += cnt[static_cast<std::size_t>(w)];
                cnt[static_cast<std::size_t>(v)] = c;
                continue;
            }
            stack.push_back({v, true});
            for (NodeId w : t.children(v)) stack.push_back({w, false});
        }
    }
    const double s = static_cast<double>(subset.size());
    double h = 0;
    for (NodeId v : subset) h += std::log2(s / static_cast<double>(cnt[static_cast<std::size_t>(v)]));
    return h;
}

/// H_k: the maximum of H_S over |S| <= k, attained by a descendant-closed
/// set; picking the k nodes with smallest subtree size is descendant-closed
/// (subtree sizes strictly decrease downwards) and optimal. Returns the value
/// and the witness set.
inline std::pair<double, std::vector<NodeId>> entropy_k(const RootedForest& t, std::size_t k) {
    if (k == 0) raise(Errc::BadParams, "k must be positive");
    auto size = detail_entropy::subtree_sizes(t);
    std::vector<NodeId> nodes = t.alive_nodes();
    k = std::min(k, nodes.size());
    std::nth_element(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(k - 1), nodes.end(),
                     [&](NodeId a, NodeId b) {
                         auto sa = size[static_cast<std::size_t>(a)];
                         auto sb = size[static_cast<std::size_t>(b)];
                         return sa != sb ? sa < sb : a < b;
                     });
    nodes.resize(k);
    // S is descendant-closed, so |T_v ∩ S| = |T_v|
    double h = 0;
    for (NodeId v : nodes)
        h += std::log2(static_cast<double>(k) / static_cast<double>(size[static_cast<std::size_t>(v)]));
    return {h, nodes};
}

/// Number of linear extensions of the tree order (ancestors above), by the
/// hook-length formula: n! / prod |T_v|. Exact.
inline BigInt count_linear_extensions(const RootedForest& t) {
    auto size = detail_entropy::subtree_sizes(t);
    BigInt num = 1;
    std::size_t n = t.alive_count();
    for (std::size_t i = 2; i <= n; ++i) num *= static_cast<unsigned long long>(i);
    BigInt den = 1;
    for (NodeId v : t.alive_nodes()) den *= static_cast<unsigned long long>(size[static_cast<std::size_t>(v)]);
    return num / den;
}

/// Number of orderings of S consistent with the tree order:
/// |S|! * prod over u in S of 1/|V(T_u) ∩ S|. Exact.
inline BigInt count_le_subset(const RootedForest& t, const std::vector<NodeId>& subset) {
    std::vector<char> in(t.capacity(), 0);
    for (NodeId v : subset) in[static_cast<std::size_t>(v)] = 1;
    std::vector<std::size_t> cnt(t.capacity(), 0);
    for (NodeId r : t.roots()) {
        std::vector<std::pair<NodeId, bool>> stack{{r, false}};
        while (!stack.empty()) {
            auto [v, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                std::size_t c = in[static_cast<std::size_t>(v)] ? 1 : 0;
                for (NodeId w : t.children(v)) c += cnt[static_cast<std::size_t>(w)];
                cnt[static_cast<std::size_t>(v)] = c;
                continue;
            }
            stack.push_back({v, true});
            for (NodeId w : t.children(v)) stack.push_back({w, false});
        }
    }
    BigInt num = 1;
    for (std::size_t i = 2; i <= subset.size(); ++i) num *= static_cast<unsigned long long>(i);
    BigInt den = 1;
    for (NodeId v : subset) den *= static_cast<unsigned long long>(cnt[static_cast<std::size_t>(v)]);
    return num / den;
}

/// Brute-force count of length-k prefixes of linear extensions (elements
/// listed ascending, i.e. children before parents): subset-DP over removed
/// sets. Only for small trees.
inline BigInt enumerate_le_prefixes(const RootedForest& t, std::size_t k) {
    const std::vector<NodeId> nodes = t.alive_nodes();
    const std::size_t n = nodes.size();
    if (n > 20) raise(Errc::TooLarge, "prefix enumeration needs n <= 20");
    std::vector<std::size_t> idx(t.capacity(), 0);
    for (std::size_t i = 0; i < n; ++i) idx[static_cast<std::size_t>(nodes[i])] = i;
    std::vector<std::uint32_t> child_mask(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (NodeId c : t.children(nodes[i]))
            child_mask[i] |= (1u << idx[static_cast<std::size_t>(c)]);
    // ways[mask] = number of orderings removing exactly `mask`, children first
    std::vector<BigInt> ways(std::size_t(1) << n, 0);
    ways[0] = 1;
    BigInt total = (k == 0) ? BigInt(1) : BigInt(0);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        BigInt w = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            const std::uint32_t rest = mask & ~(1u << i);
            if ((child_mask[i] & rest) == child_mask[i]) w += ways[rest];
        }
        ways[mask] = w;
        if (static_cast<std::size_t>(__builtin_popcount(mask)) == k) total += w;
    }
    return total;
}

/// Reported lower bound for m operations, in bits:
/// max(H_{floor(m/2)} - m*log2(e), m, n). Report datum only.
inline double lower_bound_bits(const RootedForest& t, std::size_t m) {
    const double n = static_cast<double>(t.alive_count());
    double best = std::max(static_cast<double>(m), n);
    std::size_t k = m / 2;
    if (k >= 1) {
        auto [h, witness] = entropy_k(t, k);
        best = std::max(best, h - static_cast<double>(m) * std::log2(std::exp(1.0)));
    }
    return best;
}

/// Subdivides every edge of a rooted forest (carrier node per edge).
inline RootedForest subdivide(const RootedForest& t) {
    std::vector<NodeId> parents(t.capacity(), kNoNode);
    NodeId next = static_cast<NodeId>(t.capacity());
    std::vector<NodeId> carrier(t.capacity(), kNoNode);
    for (NodeId v : t.alive_nodes())
        if (t.parent(v) != kNoNode) carrier[static_cast<std::size_t>(v)] = next++;
    parents.resize(static_cast<std::size_t>(next), kNoNode);
    for (NodeId v : t.alive_nodes()) {
        NodeId p = t.parent(v);
        if (p == kNoNode) continue;
        NodeId ve = carrier[static_cast<std::size_t>(v)];
        parents[static_cast<std::size_t>(v)] = ve;
        parents[static_cast<std::size_t>(ve)] = p;
    }
    return RootedForest::build(parents);
}

/// Checks H_k(subdivided T) <= 2 H_k(T) + 2k.
inline bool h_tilde_bound_check(const RootedForest& t, std::size_t k) {
    RootedForest td = subdivide(t);
    auto [hk, w1] = entropy_k(t, k);
    auto [hk_tilde, w2] = entropy_k(td, k);
    return hk_tilde <= 2.0 * hk + 2.0 * static_cast<double>(k) + 1e-9;
}

inline double log2_of(const BigInt& x) { return detail_entropy::log2_big(x); }

}  // namespace dtm
