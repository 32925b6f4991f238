#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/detail/euler_forest.hpp"
#include "dtm/forest.hpp"

namespace dtm {

/// Decremental Tree Roots: maps any node to the root of its current tree,
/// mirroring cut and split mutations of the underlying forest. Purely
/// structural; never touches the priority oracle.
///
/// Two backends sit behind the same interface. The default keeps each
/// component's Euler tour in a balanced tree (logarithmic per op). The
/// doubled backend expands every original node v into an edge p_v -> c_v and
/// routes operations through a cut-only core, so cut/split/root become plain
/// core calls; the core here is logarithmic as well, which affects wall-time
/// constants only.
class TreeRoots {
public:
    enum class Backend { euler, doubled };

    explicit TreeRoots(const RootedForest& f, Backend backend = Backend::euler)
        : backend_(backend) {
        if (backend_ == Backend::euler) {
            euler_ = std::make_unique<detail::EulerForest<detail::NoAggPolicy>>();
            euler_->init_from(f);
            parent_.assign(f.capacity(), kNoNode);
            alive_.assign(f.capacity(), false);
            for (NodeId v : f.alive_nodes()) {
                parent_[static_cast<std::size_t>(v)] = f.parent(v);
                alive_[static_cast<std::size_t>(v)] = true;
            }
        } else {
            init_doubled(f);
        }
    }

    Backend backend() const { return backend_; }

    /// The root of the tree containing v.
    NodeId root(NodeId v) {
        check_alive(v);
        if (backend_ == Backend::euler) return euler_->component_root(v);
        NodeId x = xnode_of(v);
        NodeId r = core_root(x);
        return owner_[static_cast<std::size_t>(r)];
    }

    /// Mirrors f.cut(v).
    void cut(NodeId v) {
        check_alive(v);
        if (backend_ == Backend::euler) {
            if (parent_[static_cast<std::size_t>(v)] == kNoNode)
                raise(Errc::IsRoot, "roots_cut of root");
            euler_->cut(v);
            parent_[static_cast<std::size_t>(v)] = kNoNode;
            return;
        }
        // original v: cut p_v from its parent; non-original: cut its core node
        NodeId x = original_[static_cast<std::size_t>(v)] ? p_of(v) : xmap_[static_cast<std::size_t>(v)];
        core_cut(x);
    }

    /// Mirrors f.split(v) -> (u1, u2); the caller passes the handles the
    /// forest minted so queries stay aligned.
    void split(NodeId v, NodeId u1, NodeId u2) {
        check_alive(v);
        grow_handles(u2);
        if (backend_ == Backend::euler) {
            NodeId p = parent_[static_cast<std::size_t>(v)];
            euler_->split_replace(v, u1, u2);
            parent_[static_cast<std::size_t>(u1)] = p;
            parent_[static_cast<std::size_t>(u2)] = kNoNode;
            alive_[static_cast<std::size_t>(v)] = false;
            alive_[static_cast<std::size_t>(u1)] = true;
            alive_[static_cast<std::size_t>(u2)] = true;
            return;
        }
        alive_[static_cast<std::size_t>(v)] = false;
        alive_[static_cast<std::size_t>(u1)] = true;
        alive_[static_cast<std::size_t>(u2)] = true;
        if (original_[static_cast<std::size_t>(v)]) {
            // X.cut(c_v); p_v becomes u1, c_v becomes u2
            core_cut(c_of(v));
            bind(u1, p_of(v));
            bind(u2, c_of(v));
            original_[static_cast<std::size_t>(v)] = false;
        } else {
            // v is a root or leaf: one side keeps v's core node, the other is fresh
            NodeId xv = xmap_[static_cast<std::size_t>(v)];
            NodeId fresh = make_core_isolated();
            bool v_is_root = owner_is_core_root(xv);
            if (v_is_root) {
                bind(u1, fresh);
                bind(u2, xv);
            } else {
                bind(u1, xv);
                bind(u2, fresh);
            }
        }
    }

private:
    void check_alive(NodeId v) const {
        if (v < 0 || static_cast<std::size_t>(v) >= alive_.size() || !alive_[static_cast<std::size_t>(v)])
            raise(Errc::DeadNode, "tree_roots handle " + std::to_string(v));
    }

    void grow_handles(NodeId hi) {
        if (static_cast<std::size_t>(hi) >= alive_.size()) {
            alive_.resize(static_cast<std::size_t>(hi) + 1, false);
            if (backend_ == Backend::euler) {
                parent_.resize(static_cast<std::size_t>(hi) + 1, kNoNode);
            } else {
                original_.resize(static_cast<std::size_t>(hi) + 1, false);
                xmap_.resize(static_cast<std::size_t>(hi) + 1, kNoNode);
            }
        }
    }

    // ---- doubled backend ----

    NodeId p_of(NodeId v) const { return 2 * v; }
    NodeId c_of(NodeId v) const { return 2 * v + 1; }

    NodeId xnode_of(NodeId v) const {
        return original_[static_cast<std::size_t>(v)] ? p_of(v) : xmap_[static_cast<std::size_t>(v)];
    }

    void bind(NodeId handle, NodeId xnode) {
        grow_handles(handle);
        xmap_[static_cast<std::size_t>(handle)] = xnode;
        original_[static_cast<std::size_t>(handle)] = false;
        if (static_cast<std::size_t>(xnode) >= owner_.size()) owner_.resize(static_cast<std::size_t>(xnode) + 1, kNoNode);
        owner_[static_cast<std::size_t>(xnode)] = handle;
    }

    void init_doubled(const RootedForest& f) {
        const std::size_t cap = f.capacity();
        alive_.assign(cap, false);
        original_.assign(cap, false);
        xmap_.assign(cap, kNoNode);
        std::vector<NodeId> core_parents(2 * cap, kNoNode);
        owner_.assign(2 * cap, kNoNode);
        for (NodeId v : f.alive_nodes()) {
            alive_[static_cast<std::size_t>(v)] = true;
            original_[static_cast<std::size_t>(v)] = true;
            core_parents[static_cast<std::size_t>(c_of(v))] = p_of(v);
            NodeId pv = f.parent(v);
            if (pv != kNoNode) core_parents[static_cast<std::size_t>(p_of(v))] = c_of(pv);
            owner_[static_cast<std::size_t>(p_of(v))] = v;
            owner_[static_cast<std::size_t>(c_of(v))] = v;
        }
        core_forest_ = RootedForest::build(core_parents);
        core_ = std::make_unique<detail::EulerForest<detail::NoAggPolicy>>();
        core_->init_from(core_forest_);
        core_parent_ = std::move(core_parents);
    }

    NodeId core_root(NodeId x) { return core_->component_root(x); }

    void core_cut(NodeId x) {
        if (core_parent_[static_cast<std::size_t>(x)] == kNoNode) raise(Errc::IsRoot, "core cut of root");
        core_->cut(x);
        core_parent_[static_cast<std::size_t>(x)] = kNoNode;
    }

    bool owner_is_core_root(NodeId x) { return core_parent_[static_cast<std::size_t>(x)] == kNoNode; }

    NodeId make_core_isolated() {
        NodeId x = static_cast<NodeId>(core_parent_.size());
        core_parent_.push_back(kNoNode);
        owner_.push_back(kNoNode);
        core_->add_isolated(x);
        return x;
    }

    Backend backend_;
    std::vector<bool> alive_;

    // euler backend
    std::unique_ptr<detail::EulerForest<detail::NoAggPolicy>> euler_;
    std::vector<NodeId> parent_;

    // doubled backend
    std::unique_ptr<detail::EulerForest<detail::NoAggPolicy>> core_;
    RootedForest core_forest_;
    std::vector<NodeId> core_parent_;
    std::vector<bool> original_;
    std::vector<NodeId> xmap_;   // non-original handle -> core node
    std::vector<NodeId> owner_;  // core node -> current handle
};

}  // namespace dtm
