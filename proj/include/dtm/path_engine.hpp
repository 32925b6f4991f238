#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/detail/lca.hpp"
#include "dtm/forest.hpp"
#include "dtm/oracle.hpp"
#include "dtm/tree_roots.hpp"

namespace dtm {

/// Decremental tree minima on a forest of paths, each rooted at one of its
/// endpoints. Preprocessing strings all components together, spends O(n)
/// priority comparisons on one sequence Cartesian tree, and from then on
/// queries and cuts are comparison-free: range minima are LCA lookups on
/// integer depths, and cuts only move the per-root leaf pointers.
class PathDtm {
public:
    PathDtm(const RootedForest& f, PriorityOracle& oracle)
        : oracle_(&oracle), roots_(f, TreeRoots::Backend::euler) {
        const std::size_t cap = f.capacity();
        pos_.assign(cap, -1);
        parent_.assign(cap, kNoNode);
        leaf_of_root_.assign(cap, kNoNode);
        alive_.assign(cap, false);

        // concatenate components root -> leaf
        for (NodeId r : f.roots()) {
            NodeId v = r;
            NodeId leaf = r;
            while (true) {
                if (f.child_count(v) > 1) raise(Errc::NotAPathForest, "branching at " + std::to_string(v));
                pos_[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(order_.size());
                order_.push_back(v);
                alive_[static_cast<std::size_t>(v)] = true;
                parent_[static_cast<std::size_t>(v)] = f.parent(v);
                leaf = v;
                NodeId c = f.first_child(v);
                if (c == kNoNode) break;
                v = c;
            }
            leaf_of_root_[static_cast<std::size_t>(r)] = leaf;
        }

        rmq_ = detail::SequenceRmq(order_.size(), [&](std::size_t i, std::size_t j) {
            return oracle_->less(oracle_->ref(order_[i]), oracle_->ref(order_[j]));
        });
    }

    /// Minimum-priority node of v's component. Zero priority comparisons.
    NodeId tree_min(NodeId v) {
        check(v);
        NodeId r = roots_.root(v);
        NodeId leaf = leaf_of_root_[static_cast<std::size_t>(r)];
        std::size_t i = static_cast<std::size_t>(pos_[static_cast<std::size_t>(r)]);
        std::size_t j = static_cast<std::size_t>(pos_[static_cast<std::size_t>(leaf)]);
        return order_[rmq_.argmin(i, j)];
    }

    PriorityRef tree_min_ref(NodeId v) { return oracle_->ref(tree_min(v)); }

    /// Mirrors cut(v) on the underlying path forest.
    void cut(NodeId v) {
        check(v);
        NodeId u = parent_[static_cast<std::size_t>(v)];
        if (u == kNoNode) raise(Errc::IsRoot, "path cut of root " + std::to_string(v));
        NodeId r = roots_.root(v);
        // the path r..leaf_r splits into r..u and v..leaf_r
        leaf_of_root_[static_cast<std::size_t>(v)] = leaf_of_root_[static_cast<std::size_t>(r)];
        leaf_of_root_[static_cast<std::size_t>(r)] = u;
        parent_[static_cast<std::size_t>(v)] = kNoNode;
        roots_.cut(v);
    }

    bool is_root(NodeId v) const { return parent_[static_cast<std::size_t>(v)] == kNoNode; }

private:
    void check(NodeId v) const {
        if (v < 0 || static_cast<std::size_t>(v) >= alive_.size() || !alive_[static_cast<std::size_t>(v)])
            raise(Errc::DeadNode, "path node " + std::to_string(v));
    }

    PriorityOracle* oracle_;
    TreeRoots roots_;
    std::vector<NodeId> order_;
    std::vector<std::int64_t> pos_;
    std::vector<NodeId> parent_;
    std::vector<NodeId> leaf_of_root_;
    std::vector<bool> alive_;
    detail::SequenceRmq rmq_;
};

/// Decremental semigroup tree sums on a forest of rooted paths. Each current
/// subpath is covered by the minimal set of aligned power-of-two blocks
/// I_{p,q} (intersected with the sequence when its length is not a power of
/// two); per component the blocks sit in a two-stack deque whose stacks carry
/// suffix aggregates, so the component sum is one combine away. A cut pops
/// blocks from the end nearer to the cut point and subdivides the straddling
/// block; a block is subdivided at most once over its lifetime.
///
/// Semigroup requirements: `using Value;` and `Value combine(a, b)` —
/// commutative and associative (caller-asserted). No identity is needed.
template <class Semigroup>
class PathSemigroupSums {
public:
    using Value = typename Semigroup::Value;

    PathSemigroupSums(const RootedForest& f, const std::vector<Value>& weights, Semigroup sg = {})
        : sg_(sg), roots_(f, TreeRoots::Backend::euler) {
        const std::size_t cap = f.capacity();
        pos_.assign(cap, -1);
        parent_.assign(cap, kNoNode);
        alive_.assign(cap, false);
        deque_of_root_.assign(cap, -1);

        std::vector<std::pair<std::size_t, std::size_t>> spans;  // [first,last] per component
        std::vector<NodeId> roots = f.roots();
        for (NodeId r : roots) {
            std::size_t first = order_.size();
            NodeId v = r;
            while (true) {
                if (f.child_count(v) > 1) raise(Errc::NotAPathForest, "branching at " + std::to_string(v));
                pos_[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(order_.size());
                order_.push_back(v);
                alive_[static_cast<std::size_t>(v)] = true;
                parent_[static_cast<std::size_t>(v)] = f.parent(v);
                NodeId c = f.first_child(v);
                if (c == kNoNode) break;
                v = c;
            }
            spans.emplace_back(first, order_.size() - 1);
        }

        const std::size_t n = order_.size();
        levels_ = 1;
        while ((std::size_t(1) << levels_) < std::max<std::size_t>(n, 1)) ++levels_;
        ++levels_;
        level_sum_.resize(levels_);
        if (n > 0) {
            level_sum_[0].reserve(n);
            for (std::size_t i = 0; i < n; ++i)
                level_sum_[0].push_back(weights[static_cast<std::size_t>(order_[i])]);
            for (std::size_t p = 1; p < levels_; ++p) {
                const std::size_t cnt = (level_sum_[p - 1].size() + 1) / 2;
                level_sum_[p].reserve(cnt);
                for (std::size_t q = 0; q < cnt; ++q) {
                    const std::size_t a = 2 * q;
                    const std::size_t b = 2 * q + 1;
                    if (b < level_sum_[p - 1].size())
                        level_sum_[p].push_back(sg_.combine(level_sum_[p - 1][a], level_sum_[p - 1][b]));
                    else
                        level_sum_[p].push_back(level_sum_[p - 1][a]);
                }
            }
        }

        std::size_t comp = 0;
        for (NodeId r : roots) {
            auto [a, b] = spans[comp++];
            deque_of_root_[static_cast<std::size_t>(r)] = static_cast<std::int64_t>(make_deque(a, b));
        }
    }

    /// Semigroup sum over v's component; O(1).
    Value tree_sum(NodeId v) {
        check(v);
        NodeId r = roots_.root(v);
        const Deque& d = deques_[static_cast<std::size_t>(deque_of_root_[static_cast<std::size_t>(r)])];
        if (!d.left.empty() && !d.right.empty())
            return sg_.combine(d.left.back().suffix, d.right.back().suffix);
        const auto& s = d.left.empty() ? d.right : d.left;
        return s.back().suffix;
    }

    /// Mirrors cut(v): splits the block decomposition at v's position.
    void cut(NodeId v) {
        check(v);
        NodeId u = parent_[static_cast<std::size_t>(v)];
        if (u == kNoNode) raise(Errc::IsRoot, "path cut of root " + std::to_string(v));
        NodeId r = roots_.root(v);
        const std::size_t m = static_cast<std::size_t>(pos_[static_cast<std::size_t>(v)]);
        std::size_t di = static_cast<std::size_t>(deque_of_root_[static_cast<std::size_t>(r)]);
        std::size_t dnew = split_deque(di, m);  // di keeps [a..m-1]; dnew holds [m..b]
        parent_[static_cast<std::size_t>(v)] = kNoNode;
        roots_.cut(v);
        deque_of_root_[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(dnew);
    }

    /// Blocks currently covering v's component, left to right (diagnostics).
    std::vector<std::pair<std::size_t, std::size_t>> blocks_of(NodeId v) {
        check(v);
        NodeId r = roots_.root(v);
        const Deque& d = deques_[static_cast<std::size_t>(deque_of_root_[static_cast<std::size_t>(r)])];
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (auto it = d.left.rbegin(); it != d.left.rend(); ++it) out.emplace_back(it->lo, it->hi);
        for (const auto& e : d.right) out.emplace_back(e.lo, e.hi);
        return out;
    }

    std::size_t position_of(NodeId v) const { return static_cast<std::size_t>(pos_[static_cast<std::size_t>(v)]); }

    std::uint64_t stack_ops() const { return stack_ops_; }

private:
    struct Block {
        std::size_t lo, hi;  // positions [lo, hi]; a (possibly truncated) I_{p,q}
        std::size_t level;
    };
    struct Entry : Block {
        Value suffix;  // aggregate of this entry and everything below it in its stack
    };
    /// left: bottom = innermost block, top/back() = leftmost block.
    /// right: bottom = innermost block, top/back() = rightmost block.
    struct Deque {
        std::vector<Entry> left;
        std::vector<Entry> right;
    };

    void check(NodeId v) const {
        if (v < 0 || static_cast<std::size_t>(v) >= alive_.size() || !alive_[static_cast<std::size_t>(v)])
            raise(Errc::DeadNode, "path node " + std::to_string(v));
    }

    Value block_sum(const Block& b) const { return level_sum_[b.level][b.lo >> b.level]; }

    void push(std::vector<Entry>& s, const Block& b) {
        Value sum = block_sum(b);
        Entry e{{b.lo, b.hi, b.level}, s.empty() ? sum : sg_.combine(sum, s.back().suffix)};
        s.push_back(std::move(e));
        ++stack_ops_;
    }

    Block pop(std::vector<Entry>& s) {
        Block b = s.back();
        s.pop_back();
        ++stack_ops_;
        return b;
    }

    /// Canonical (minimal) decomposition of [a..b], left to right: the
    /// largest aligned block fitting at each position, where blocks touching
    /// the global end may be truncated.
    std::vector<Block> canonical(std::size_t a, std::size_t b) const {
        std::vector<Block> out;
        const std::size_t last = level_sum_[0].size() - 1;
        std::size_t i = a;
        while (i <= b) {
            std::size_t p = i == 0 ? levels_ - 1 : static_cast<std::size_t>(__builtin_ctzll(i));
            if (p >= levels_) p = levels_ - 1;
            while (p > 0 && std::min(i + (std::size_t(1) << p) - 1, last) > b) --p;
            std::size_t hi = std::min(i + (std::size_t(1) << p) - 1, last);
            out.push_back(Block{i, hi, p});
            i = hi + 1;
        }
        return out;
    }

    std::size_t make_deque(std::size_t a, std::size_t b) {
        deques_.emplace_back();
        std::size_t idx = deques_.size() - 1;
        for (const Block& blk : canonical(a, b)) push(deques_[idx].right, blk);
        return idx;
    }

    std::size_t make_deque(const std::vector<Block>& in_order) {
        deques_.emplace_back();
        std::size_t idx = deques_.size() - 1;
        for (const Block& blk : in_order) push(deques_[idx].right, blk);
        return idx;
    }

    /// Splits deque di at position m: di keeps [a..m-1], the returned deque
    /// holds [m..b]. Pops from the end nearer to m in positions.
    std::size_t split_deque(std::size_t di, std::size_t m) {
        {
            Deque& d0 = deques_[di];
            const std::size_t lo_end = outer_lo(d0);
            const std::size_t hi_end = outer_hi(d0);
            if (m - lo_end <= hi_end - m + 1) {
                // collect the blocks of [lo..m-1] off the left end
                std::vector<Block> taken;  // left to right
                for (;;) {
                    Block e = pop_front(d0);
                    if (e.hi < m) {
                        taken.push_back(e);
                        continue;
                    }
                    if (e.lo >= m) {
                        push_front(d0, e);
                        break;
                    }
                    auto [l, r] = subdivide(e, m);
                    for (const Block& x : l) taken.push_back(x);
                    for (std::size_t k = r.size(); k-- > 0;) push_front(d0, r[k]);
                    break;
                }
                // d0 now holds [m..b]; hand its stacks to the new deque and
                // rebuild di as the left interval
                deques_.emplace_back();
                Deque& d = deques_[di];
                Deque& nd = deques_.back();
                nd.left = std::move(d.left);
                nd.right = std::move(d.right);
                d.left.clear();
                d.right.clear();
                for (const Block& x : taken) push(d.right, x);
                return deques_.size() - 1;
            }
        }
        // collect the blocks of [m..hi] off the right end
        std::vector<Block> taken_rev;  // right to left
        {
            Deque& d0 = deques_[di];
            for (;;) {
                Block e = pop_back(d0);
                if (e.lo >= m) {
                    taken_rev.push_back(e);
                    continue;
                }
                if (e.hi < m) {
                    push_back(d0, e);
                    break;
                }
                auto [l, r] = subdivide(e, m);
                for (std::size_t k = r.size(); k-- > 0;) taken_rev.push_back(r[k]);
                for (const Block& x : l) push_back(d0, x);
                break;
            }
        }
        std::reverse(taken_rev.begin(), taken_rev.end());
        return make_deque(taken_rev);
    }

    std::size_t outer_lo(const Deque& d) const { return d.left.empty() ? d.right.front().lo : d.left.back().lo; }
    std::size_t outer_hi(const Deque& d) const { return d.right.empty() ? d.left.front().hi : d.right.back().hi; }

    Block pop_front(Deque& d) {
        if (d.left.empty()) rebalance(d.right, d.left);
        return pop(d.left);
    }
    Block pop_back(Deque& d) {
        if (d.right.empty()) rebalance(d.left, d.right);
        return pop(d.right);
    }
    void push_front(Deque& d, const Block& b) { push(d.left, b); }
    void push_back(Deque& d, const Block& b) { push(d.right, b); }

    /// Underflow: `to` receives the inner half (at least one block), the
    /// outer half stays in `from` (half-split policy).
    void rebalance(std::vector<Entry>& from, std::vector<Entry>& to) {
        std::vector<Block> outward;  // from the shared inner end outward
        while (!from.empty()) outward.push_back(pop(from));
        std::reverse(outward.begin(), outward.end());  // now ordered inner..outer of `from`
        const std::size_t inner = outward.size() - outward.size() / 2;
        for (std::size_t k = inner; k-- > 0;) push(to, outward[k]);
        for (std::size_t k = inner; k < outward.size(); ++k) push(from, outward[k]);
    }

    /// Splits block e (with e.lo < m <= e.hi) into the canonical sub-blocks
    /// of [e.lo, m-1] and [m, e.hi] by walking down the subdivision tree.
    std::pair<std::vector<Block>, std::vector<Block>> subdivide(Block e, std::size_t m) {
        std::vector<Block> left, right;
        for (;;) {
            const std::size_t half = std::size_t(1) << (e.level - 1);
            const std::size_t mid = e.lo + half;  // first position of the right child
            Block lchild{e.lo, std::min(e.hi, mid - 1), e.level - 1};
            if (mid > e.hi) {
                e = lchild;  // truncated: only the left child exists
                continue;
            }
            Block rchild{mid, e.hi, e.level - 1};
            if (m == mid) {
                left.push_back(lchild);
                right.insert(right.begin(), rchild);
                return {left, right};
            }
            if (m < mid) {
                right.insert(right.begin(), rchild);
                e = lchild;
            } else {
                left.push_back(lchild);
                e = rchild;
            }
        }
    }

    Semigroup sg_;
    TreeRoots roots_;
    std::vector<NodeId> order_;
    std::vector<std::int64_t> pos_;
    std::vector<NodeId> parent_;
    std::vector<bool> alive_;
    std::vector<std::int64_t> deque_of_root_;
    std::vector<Deque> deques_;
    std::vector<std::vector<Value>> level_sum_;
    std::size_t levels_ = 1;
    std::uint64_t stack_ops_ = 0;
};

}  // namespace dtm
