#pragma once

#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/dynamic_forest.hpp"
#include "dtm/forest.hpp"

namespace dtm {

/// Maintains leftmost and rightmost leaves of any rooted subtree under cut
/// and split. Two label-keyed dynamic forests are used: a left-to-right
/// post-order labeling (leftmost leaf = minimum label in the subtree) and its
/// right-to-left mirror. Labels are plain integers and are never reassigned;
/// split-created nodes inherit the split node's label. No oracle involved.
class ExtremalLeaves {
public:
    explicit ExtremalLeaves(const RootedForest& f)
        : left_(f, post_order_labels(f, /*mirror=*/false), LabelMinPolicy{}),
          right_(f, post_order_labels(f, /*mirror=*/true), LabelMinPolicy{}) {}

    void cut(NodeId v) {
        left_.cut(v);
        right_.cut(v);
    }

    void split(NodeId v, NodeId u1, NodeId u2) {
        left_.split_into(v, u1, u2);
        right_.split_into(v, u1, u2);
    }

    /// (leftmost leaf, rightmost leaf) of the subtree rooted at v: detach the
    /// subtree, take its component minimum, and reattach — the forests are
    /// restored exactly.
    std::pair<NodeId, NodeId> extremal(NodeId v) {
        NodeId lm = subtree_min(left_, v);
        NodeId rm = subtree_min(right_, v);
        return {lm, rm};
    }

    bool is_leaf(NodeId v) const { return left_.is_leaf(v); }

private:
    static std::vector<LabelMinPolicy::Value> post_order_labels(const RootedForest& f, bool mirror) {
        std::vector<LabelMinPolicy::Value> labels(f.capacity());
        std::int64_t next = 0;
        for (NodeId r : f.roots()) {
            // iterative post-order; mirrored variant visits children reversed
            std::vector<std::pair<NodeId, bool>> stack{{r, false}};
            while (!stack.empty()) {
                auto [v, expanded] = stack.back();
                stack.pop_back();
                if (expanded) {
                    labels[static_cast<std::size_t>(v)] = {next++, v};
                    continue;
                }
                stack.push_back({v, true});
                std::vector<NodeId> cs = f.children(v);
                if (mirror) {
                    for (NodeId c : cs) stack.push_back({c, false});
                } else {
                    for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.push_back({*it, false});
                }
            }
        }
        return labels;
    }

    static NodeId subtree_min(DynamicForest<LabelMinPolicy>& d, NodeId v) {
        if (d.is_root(v)) return d.tree_aggregate_direct(v).node;
        NodeId u = d.parent(v);
        d.cut(v);
        NodeId m = d.tree_aggregate_direct(v).node;
        d.link(v, u);
        assert(d.parent(v) == u);
        return m;
    }

    DynamicForest<LabelMinPolicy> left_;
    DynamicForest<LabelMinPolicy> right_;
};

}  // namespace dtm
