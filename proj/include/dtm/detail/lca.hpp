#pragma once

#include <cstdint>
#include <vector>

#include "dtm/core.hpp"

namespace dtm::detail {

/// Constant-time LCA over a static rooted forest, via an Euler tour and a
/// block-decomposed +-1 RMQ on the depth array. Everything here is integer
/// arithmetic; no priority comparisons ever happen at query time.
class EulerTourLca {
public:
    EulerTourLca() = default;

    /// parents[v] = parent id or kNoNode. Ids must be dense in [0, n).
    explicit EulerTourLca(const std::vector<NodeId>& parents) {
        const std::size_t n = parents.size();
        std::vector<std::vector<NodeId>> kids(n);
        std::vector<NodeId> roots;
        for (std::size_t v = 0; v < n; ++v) {
            if (parents[v] == kNoNode)
                roots.push_back(static_cast<NodeId>(v));
            else
                kids[static_cast<std::size_t>(parents[v])].push_back(static_cast<NodeId>(v));
        }
        first_.assign(n, -1);
        comp_.assign(n, -1);
        euler_.reserve(2 * n);
        depth_.reserve(2 * n);
        int comp_id = 0;
        for (NodeId r : roots) {
            // iterative DFS with child indices
            std::vector<std::pair<NodeId, std::size_t>> stack;
            stack.emplace_back(r, 0);
            visit(r, 0, comp_id);
            while (!stack.empty()) {
                auto& [v, ci] = stack.back();
                if (ci < kids[static_cast<std::size_t>(v)].size()) {
                    NodeId c = kids[static_cast<std::size_t>(v)][ci++];
                    visit(c, static_cast<int>(stack.size()), comp_id);
                    stack.emplace_back(c, 0);
                } else {
                    stack.pop_back();
                    if (!stack.empty()) {
                        NodeId p = stack.back().first;
                        euler_.push_back(p);
                        depth_.push_back(static_cast<int>(stack.size()) - 1);
                    }
                }
            }
            ++comp_id;
        }
        build_rmq();
    }

    /// Lowest common ancestor of u and v, or kNoNode when they lie in
    /// different trees of the forest.
    NodeId lca(NodeId u, NodeId v) const {
        if (comp_[static_cast<std::size_t>(u)] != comp_[static_cast<std::size_t>(v)]) return kNoNode;
        std::size_t a = static_cast<std::size_t>(first_[static_cast<std::size_t>(u)]);
        std::size_t b = static_cast<std::size_t>(first_[static_cast<std::size_t>(v)]);
        if (a > b) std::swap(a, b);
        return euler_[argmin(a, b)];
    }

    int depth_of(NodeId v) const { return depth_[static_cast<std::size_t>(first_[static_cast<std::size_t>(v)])]; }

private:
    void visit(NodeId v, int depth, int comp) {
        if (first_[static_cast<std::size_t>(v)] < 0)
            first_[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(euler_.size());
        comp_[static_cast<std::size_t>(v)] = comp;
        euler_.push_back(v);
        depth_.push_back(depth);
    }

    void build_rmq() {
        const std::size_t m = depth_.size();
        if (m == 0) return;
        // block length ~ half the log keeps the per-pattern tables linear
        block_ = 1;
        while (block_ < 13 && (std::size_t(1) << (2 * block_)) < m) ++block_;
        const std::size_t b = block_;
        const std::size_t nb = (m + b - 1) / b;
        block_min_pos_.resize(nb);
        block_pattern_.resize(nb);
        for (std::size_t i = 0; i < nb; ++i) {
            const std::size_t lo = i * b;
            const std::size_t hi = std::min(m, lo + b);
            std::size_t best = lo;
            std::uint32_t pat = 0;
            for (std::size_t j = lo + 1; j < hi; ++j) {
                if (depth_[j] < depth_[best]) best = j;
                if (depth_[j] > depth_[j - 1]) pat |= (1u << (j - lo - 1));
            }
            block_min_pos_[i] = best;
            block_pattern_[i] = pat;
        }
        // sparse table over block minima
        std::size_t levels = 1;
        while ((std::size_t(1) << levels) <= nb) ++levels;
        sparse_.assign(levels, std::vector<std::uint32_t>(nb));
        for (std::size_t i = 0; i < nb; ++i) sparse_[0][i] = static_cast<std::uint32_t>(i);
        for (std::size_t k = 1; k < levels; ++k) {
            for (std::size_t i = 0; i + (std::size_t(1) << k) <= nb; ++i) {
                std::uint32_t a = sparse_[k - 1][i];
                std::uint32_t c = sparse_[k - 1][i + (std::size_t(1) << (k - 1))];
                sparse_[k][i] = depth_[block_min_pos_[a]] <= depth_[block_min_pos_[c]] ? a : c;
            }
        }
        // per-pattern in-block argmin tables
        const std::size_t npat = std::size_t(1) << (b - 1);
        pattern_argmin_.assign(npat * b * b, 0);
        std::vector<int> pref(b);
        for (std::size_t pat = 0; pat < npat; ++pat) {
            pref[0] = 0;
            for (std::size_t j = 1; j < b; ++j) pref[j] = pref[j - 1] + ((pat >> (j - 1)) & 1 ? 1 : -1);
            for (std::size_t i = 0; i < b; ++i) {
                std::size_t best = i;
                for (std::size_t j = i; j < b; ++j) {
                    if (pref[j] < pref[best]) best = j;
                    pattern_argmin_[(pat * b + i) * b + j] = static_cast<std::uint8_t>(best);
                }
            }
        }
    }

    std::size_t in_block_argmin(std::size_t blk, std::size_t i, std::size_t j) const {
        const std::size_t b = block_;
        const std::size_t pat = block_pattern_[blk];
        return blk * b + pattern_argmin_[(pat * b + i) * b + j];
    }

    /// Position of the minimum depth in euler positions [a, b].
    std::size_t argmin(std::size_t a, std::size_t b) const {
        const std::size_t bs = block_;
        const std::size_t ba = a / bs;
        const std::size_t bb = b / bs;
        if (ba == bb) return in_block_argmin(ba, a - ba * bs, b - bb * bs);
        std::size_t best = in_block_argmin(ba, a - ba * bs, bs - 1);
        {
            std::size_t right = in_block_argmin(bb, 0, b - bb * bs);
            if (depth_[right] < depth_[best]) best = right;
        }
        if (ba + 1 <= bb - 1) {
            const std::size_t lo = ba + 1;
            const std::size_t hi = bb - 1;
            std::size_t k = 0;
            while ((std::size_t(1) << (k + 1)) <= hi - lo + 1) ++k;
            std::uint32_t x = sparse_[k][lo];
            std::uint32_t y = sparse_[k][hi - (std::size_t(1) << k) + 1];
            std::size_t cand = depth_[block_min_pos_[x]] <= depth_[block_min_pos_[y]] ? block_min_pos_[x] : block_min_pos_[y];
            if (depth_[cand] < depth_[best]) best = cand;
        }
        return best;
    }

    std::vector<NodeId> euler_;
    std::vector<int> depth_;
    std::vector<std::int64_t> first_;
    std::vector<int> comp_;
    std::size_t block_ = 1;
    std::vector<std::size_t> block_min_pos_;
    std::vector<std::uint32_t> block_pattern_;
    std::vector<std::vector<std::uint32_t>> sparse_;
    std::vector<std::uint8_t> pattern_argmin_;
};

/// Comparison-free range-minimum index over a fixed sequence: builds the
/// sequence's Cartesian tree once (priority comparisons happen in the
/// caller-supplied `less`), then answers argmin(i, j) as an LCA query on
/// integer depths.
class SequenceRmq {
public:
    SequenceRmq() = default;

    /// less(i, j) returns true when element i has strictly smaller priority.
    template <class Less>
    SequenceRmq(std::size_t n, Less&& less) {
        // classic stack construction of the sequence Cartesian tree
        std::vector<NodeId> parent(n, kNoNode);
        std::vector<NodeId> stack;
        for (std::size_t i = 0; i < n; ++i) {
            NodeId last = kNoNode;
            while (!stack.empty() && less(i, static_cast<std::size_t>(stack.back()))) {
                last = stack.back();
                stack.pop_back();
            }
            if (last != kNoNode) parent[static_cast<std::size_t>(last)] = static_cast<NodeId>(i);
            if (!stack.empty()) parent[i] = stack.back();
            stack.push_back(static_cast<NodeId>(i));
        }
        lca_ = EulerTourLca(parent);
    }

    /// Index of the minimum element in positions [i, j].
    std::size_t argmin(std::size_t i, std::size_t j) const {
        return static_cast<std::size_t>(lca_.lca(static_cast<NodeId>(i), static_cast<NodeId>(j)));
    }

private:
    EulerTourLca lca_;
};

}  // namespace dtm::detail
