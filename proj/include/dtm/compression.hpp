#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/forest.hpp"
#include "dtm/tree_roots.hpp"

namespace dtm {

using SuperNodeId = NodeId;

/// The compressed-forest event induced by a cut in the original forest:
/// a cut between two chains, or a split of the chain's super-node.
struct CanonicalOp {
    enum class Kind { Cut, Split } kind;
    SuperNodeId target;  // Cut: the child super-node; Split: the retired super-node
    SuperNodeId y1 = kNoNode;  // Split only: parent-side super-node
    SuperNodeId y2 = kNoNode;  // Split only: child-side super-node
};

/// Maintains the maximal-chain compression (F', C) of an ordered forest F
/// under cuts: the super-forest, the chain forest, top-node maps, and
/// constant-time node -> super-node / node -> root / super-node -> top-node
/// lookups. Super-nodes are immutable; splitting retires one and mints two.
class Compression {
public:
    explicit Compression(RootedForest forest)
        : f_(std::move(forest)), fc_(chain_forest(f_)), lf_(f_), lc_(fc_) {
        // contract every maximal chain: one super-node per chain top
        const std::size_t cap = f_.capacity();
        std::vector<NodeId> top_of_node(cap, kNoNode);
        std::vector<NodeId> chain_tops;
        for (NodeId v : f_.alive_nodes()) {
            bool starts_chain = f_.is_root(v) || f_.child_count(f_.parent(v)) != 1;
            if (starts_chain) chain_tops.push_back(v);
        }
        // bottom of each chain carries the super-node's children
        std::vector<NodeId> super_parent;
        std::vector<std::vector<NodeId>> super_children;
        top_.assign(chain_tops.size(), kNoNode);
        super_of_top_.assign(cap, kNoNode);
        for (std::size_t i = 0; i < chain_tops.size(); ++i) {
            top_[i] = chain_tops[i];
            super_of_top_[static_cast<std::size_t>(chain_tops[i])] = static_cast<SuperNodeId>(i);
        }
        super_parent.assign(chain_tops.size(), kNoNode);
        super_children.assign(chain_tops.size(), {});
        for (std::size_t i = 0; i < chain_tops.size(); ++i) {
            NodeId bottom = chain_bottom(f_, chain_tops[i]);
            for (NodeId c : f_.children(bottom)) {
                SuperNodeId sc = super_of_top_[static_cast<std::size_t>(c)];
                super_parent[static_cast<std::size_t>(sc)] = static_cast<SuperNodeId>(i);
                super_children[static_cast<std::size_t>(i)].push_back(sc);
            }
        }
        fp_ = RootedForest::build(super_parent, super_children);
    }

    const RootedForest& forest() const { return f_; }
    const RootedForest& chain_forest_view() const { return fc_; }
    const RootedForest& super_forest() const { return fp_; }

    /// Super-node containing v: t^{-1}(L_C.root(v)).
    SuperNodeId super_of(NodeId v) {
        return super_of_top_[static_cast<std::size_t>(lc_.root(v))];
    }

    /// Root (in F) of the component containing v.
    NodeId root_of(NodeId v) { return lf_.root(v); }

    /// Top node of the chain C(x).
    NodeId top_of(SuperNodeId x) const {
        if (x < 0 || static_cast<std::size_t>(x) >= top_.size() || top_[static_cast<std::size_t>(x)] == kNoNode)
            raise(Errc::DeadNode, "super-node " + std::to_string(x));
        return top_[static_cast<std::size_t>(x)];
    }

    /// True when v and its parent lie in the same chain (checked by
    /// comparing L_C roots, i.e. chain tops).
    bool same_chain_as_parent(NodeId v) {
        NodeId u = f_.parent(v);
        if (u == kNoNode) raise(Errc::IsRoot, "cut of root " + std::to_string(v));
        return lc_.root(u) == lc_.root(v);
    }

    /// Performs cut(v) on F and the canonical cut or split on (F', C).
    CanonicalOp cut(NodeId v) {
        NodeId u = f_.parent(v);
        if (u == kNoNode) raise(Errc::IsRoot, "cut of root " + std::to_string(v));
        const bool in_chain = lc_.root(u) == lc_.root(v);

        f_.cut(v);
        lf_.cut(v);

        if (!in_chain) {
            // between chains: canonical cut of the child super-node
            SuperNodeId y2 = super_of_top_[static_cast<std::size_t>(lc_.root(v))];
            fp_.cut(y2);
            return CanonicalOp{CanonicalOp::Kind::Cut, y2, kNoNode, kNoNode};
        }

        // within a chain: split its super-node
        SuperNodeId x = super_of_top_[static_cast<std::size_t>(lc_.root(v))];
        NodeId tx = top_[static_cast<std::size_t>(x)];
        fc_.cut(v);
        lc_.cut(v);
        auto [y1, y2] = fp_.split(x);
        grow_supers(y2);
        top_[static_cast<std::size_t>(y1)] = tx;
        top_[static_cast<std::size_t>(y2)] = v;
        super_of_top_[static_cast<std::size_t>(tx)] = y1;
        super_of_top_[static_cast<std::size_t>(v)] = y2;
        top_[static_cast<std::size_t>(x)] = kNoNode;
        return CanonicalOp{CanonicalOp::Kind::Split, x, y1, y2};
    }

private:
    static RootedForest chain_forest(const RootedForest& f) {
        // keep only edges between a single-child parent and its child
        std::vector<NodeId> parents(f.capacity(), kNoNode);
        for (NodeId v : f.alive_nodes()) {
            NodeId p = f.parent(v);
            if (p != kNoNode && f.child_count(p) == 1) parents[static_cast<std::size_t>(v)] = p;
        }
        return RootedForest::build(parents);
    }

    static NodeId chain_bottom(const RootedForest& f, NodeId top) {
        NodeId v = top;
        while (f.child_count(v) == 1) v = f.first_child(v);
        return v;
    }

    void grow_supers(SuperNodeId hi) {
        if (static_cast<std::size_t>(hi) >= top_.size()) top_.resize(static_cast<std::size_t>(hi) + 1, kNoNode);
    }

    RootedForest f_;    // original forest
    RootedForest fc_;   // chain forest F_C (over original node ids)
    TreeRoots lf_;      // roots in F
    TreeRoots lc_;      // roots in F_C = chain tops
    RootedForest fp_;   // super-forest F'
    std::vector<NodeId> top_;           // super-node -> top node of its chain
    std::vector<SuperNodeId> super_of_top_;  // chain top -> super-node
};

}  // namespace dtm
