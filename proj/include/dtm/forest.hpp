#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dtm/core.hpp"

namespace dtm {

/// Mutable ordered rooted forest with stable dense node handles.
///
/// Handles are indirected through slots: a split renames the surviving slot
/// to a fresh handle instead of rewriting its children's parent pointers, so
/// cut and split are O(1) regardless of degree. Child lists are doubly
/// linked, giving constant-time sibling-order maintenance.
class RootedForest {
public:
    RootedForest() = default;

    /// Builds a forest from a parent array; children of each node are ordered
    /// by the given child lists (each non-root exactly once under its
    /// parent). Empty child_orders orders children by ascending id.
    static RootedForest build(const std::vector<NodeId>& parents,
                              const std::vector<std::vector<NodeId>>& child_orders = {}) {
        RootedForest f;
        const std::size_t n = parents.size();
        f.slots_.resize(n);
        f.slot_of_.resize(n);
        for (std::size_t v = 0; v < n; ++v) {
            NodeId p = parents[v];
            if (p != kNoNode && (p < 0 || static_cast<std::size_t>(p) >= n))
                raise(Errc::DanglingParent, "parent out of range for node " + std::to_string(v));
            f.slots_[v].parent = p == kNoNode ? kNone : static_cast<std::int64_t>(p);
            f.slots_[v].owner = static_cast<NodeId>(v);
            f.slot_of_[v] = static_cast<std::int64_t>(v);
        }
        // cycle check by walking parent chains with visitation stamps
        {
            std::vector<int> state(n, 0);
            for (std::size_t s = 0; s < n; ++s) {
                NodeId v = static_cast<NodeId>(s);
                std::vector<NodeId> trail;
                while (v != kNoNode && state[static_cast<std::size_t>(v)] == 0) {
                    state[static_cast<std::size_t>(v)] = 1;
                    trail.push_back(v);
                    v = parents[static_cast<std::size_t>(v)];
                }
                if (v != kNoNode && state[static_cast<std::size_t>(v)] == 1)
                    raise(Errc::CycleDetected, "parent chain loops at node " + std::to_string(v));
                for (NodeId u : trail) state[static_cast<std::size_t>(u)] = 2;
            }
        }
        if (!child_orders.empty()) {
            if (child_orders.size() != n) raise(Errc::BadParams, "child_orders size mismatch");
            std::vector<int> seen(n, 0);
            for (std::size_t p = 0; p < n; ++p) {
                for (NodeId c : child_orders[p]) {
                    if (c < 0 || static_cast<std::size_t>(c) >= n ||
                        parents[static_cast<std::size_t>(c)] != static_cast<NodeId>(p))
                        raise(Errc::DanglingParent,
                              "child list of " + std::to_string(p) + " names non-child " + std::to_string(c));
                    if (seen[static_cast<std::size_t>(c)]++)
                        raise(Errc::BadParams, "child listed twice: " + std::to_string(c));
                    f.append_child_slot(static_cast<std::int64_t>(p), static_cast<std::int64_t>(c));
                }
            }
            for (std::size_t v = 0; v < n; ++v)
                if (parents[v] != kNoNode && !seen[v])
                    raise(Errc::BadParams, "child missing from its parent's list: " + std::to_string(v));
        } else {
            for (std::size_t v = 0; v < n; ++v)
                if (parents[v] != kNoNode)
                    f.append_child_slot(static_cast<std::int64_t>(parents[v]), static_cast<std::int64_t>(v));
        }
        f.alive_count_ = n;
        return f;
    }

    std::size_t handle_capacity() const { return slot_of_.size(); }
    std::size_t capacity() const { return slot_of_.size(); }
    std::size_t alive_count() const { return alive_count_; }

    bool alive(NodeId v) const {
        return v >= 0 && static_cast<std::size_t>(v) < slot_of_.size() && slot_of_[static_cast<std::size_t>(v)] >= 0;
    }

    NodeId parent(NodeId v) const { return owner(slots_[slot(v)].parent); }
    bool is_root(NodeId v) const { return slots_[slot(v)].parent == kNone; }
    bool is_leaf(NodeId v) const { return slots_[slot(v)].first_child == kNone; }
    NodeId first_child(NodeId v) const { return owner(slots_[slot(v)].first_child); }
    NodeId last_child(NodeId v) const { return owner(slots_[slot(v)].last_child); }
    NodeId next_sibling(NodeId v) const { return owner(slots_[slot(v)].next_sib); }
    NodeId prev_sibling(NodeId v) const { return owner(slots_[slot(v)].prev_sib); }
    std::size_t child_count(NodeId v) const { return slots_[slot(v)].n_children; }

    std::vector<NodeId> children(NodeId v) const {
        std::vector<NodeId> out;
        for (std::int64_t c = slots_[slot(v)].first_child; c != kNone; c = slots_[static_cast<std::size_t>(c)].next_sib)
            out.push_back(slots_[static_cast<std::size_t>(c)].owner);
        return out;
    }

    std::vector<NodeId> alive_nodes() const {
        std::vector<NodeId> out;
        for (std::size_t v = 0; v < slot_of_.size(); ++v)
            if (slot_of_[v] >= 0) out.push_back(static_cast<NodeId>(v));
        return out;
    }

    std::vector<NodeId> roots() const {
        std::vector<NodeId> out;
        for (std::size_t v = 0; v < slot_of_.size(); ++v)
            if (slot_of_[v] >= 0 && slots_[static_cast<std::size_t>(slot_of_[v])].parent == kNone)
                out.push_back(static_cast<NodeId>(v));
        return out;
    }

    /// Deletes the edge between v and its parent; v becomes a root. The
    /// former parent's child order loses v and is otherwise unchanged.
    void cut(NodeId v) {
        std::int64_t s = slot(v);
        if (slots_[static_cast<std::size_t>(s)].parent == kNone)
            raise(Errc::IsRoot, "cut of root " + std::to_string(v));
        detach_slot(s);
        ++cut_count_;
    }

    /// Replaces v by two fresh nodes (u1, u2): u1 inherits the parent and v's
    /// position among its siblings, u2 inherits the children in order. v is
    /// retired. O(1): the surviving side keeps v's slot under a new name.
    std::pair<NodeId, NodeId> split(NodeId v) {
        std::int64_t s = slot(v);
        Slot& sv = slots_[static_cast<std::size_t>(s)];
        const bool root = sv.parent == kNone;
        const bool leaf = sv.first_child == kNone;
        if (!root && !leaf) ++inner_split_count_;

        const NodeId u1 = next_handle();
        const NodeId u2 = next_handle();

        if (root) {
            // fresh isolated slot for u1; v's slot keeps the children as u2
            bind_fresh_slot(u1);
            rename_slot(s, u2);
        } else if (leaf) {
            // v's slot keeps parent and sibling position as u1; u2 fresh
            rename_slot(s, u1);
            bind_fresh_slot(u2);
        } else {
            // u1's fresh slot takes v's place in the parent's child list;
            // v's slot is detached and renamed to u2
            std::int64_t s1 = bind_fresh_slot(u1);
            Slot& n1 = slots_[static_cast<std::size_t>(s1)];
            Slot& nv = slots_[static_cast<std::size_t>(s)];
            n1.parent = nv.parent;
            n1.prev_sib = nv.prev_sib;
            n1.next_sib = nv.next_sib;
            Slot& np = slots_[static_cast<std::size_t>(nv.parent)];
            if (nv.prev_sib != kNone)
                slots_[static_cast<std::size_t>(nv.prev_sib)].next_sib = s1;
            else
                np.first_child = s1;
            if (nv.next_sib != kNone)
                slots_[static_cast<std::size_t>(nv.next_sib)].prev_sib = s1;
            else
                np.last_child = s1;
            nv.parent = kNone;
            nv.prev_sib = nv.next_sib = kNone;
            rename_slot(s, u2);
        }
        slot_of_[static_cast<std::size_t>(v)] = -1;
        --alive_count_;  // two minted, one retired: net +1 from the mints
        return {u1, u2};
    }

    /// Mints a fresh isolated node.
    NodeId make_node() {
        NodeId v = next_handle();
        bind_fresh_slot(v);
        return v;
    }

    std::uint64_t cuts_performed() const { return cut_count_; }
    std::uint64_t inner_splits_performed() const { return inner_split_count_; }

    /// Nodes of the subtree rooted at v, preorder, children in order.
    std::vector<NodeId> subtree(NodeId v) const {
        std::vector<NodeId> out;
        std::vector<std::int64_t> stack{slot(v)};
        while (!stack.empty()) {
            std::int64_t s = stack.back();
            stack.pop_back();
            out.push_back(slots_[static_cast<std::size_t>(s)].owner);
            std::vector<std::int64_t> cs;
            for (std::int64_t c = slots_[static_cast<std::size_t>(s)].first_child; c != kNone;
                 c = slots_[static_cast<std::size_t>(c)].next_sib)
                cs.push_back(c);
            for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.push_back(*it);
        }
        return out;
    }

private:
    static constexpr std::int64_t kNone = -1;

    struct Slot {
        std::int64_t parent = kNone;
        std::int64_t first_child = kNone;
        std::int64_t last_child = kNone;
        std::int64_t prev_sib = kNone;
        std::int64_t next_sib = kNone;
        std::size_t n_children = 0;
        NodeId owner = kNoNode;
    };

    std::int64_t slot(NodeId v) const {
        if (!alive(v)) raise(Errc::DeadNode, "node " + std::to_string(v));
        return slot_of_[static_cast<std::size_t>(v)];
    }

    NodeId owner(std::int64_t s) const { return s == kNone ? kNoNode : slots_[static_cast<std::size_t>(s)].owner; }

    NodeId next_handle() {
        slot_of_.push_back(-1);
        return static_cast<NodeId>(slot_of_.size() - 1);
    }

    std::int64_t bind_fresh_slot(NodeId handle) {
        slots_.emplace_back();
        std::int64_t s = static_cast<std::int64_t>(slots_.size() - 1);
        slots_.back().owner = handle;
        slot_of_[static_cast<std::size_t>(handle)] = s;
        ++alive_count_;
        return s;
    }

    void rename_slot(std::int64_t s, NodeId handle) {
        slots_[static_cast<std::size_t>(s)].owner = handle;
        slot_of_[static_cast<std::size_t>(handle)] = s;
        ++alive_count_;
    }

    void append_child_slot(std::int64_t p, std::int64_t c) {
        Slot& np = slots_[static_cast<std::size_t>(p)];
        Slot& nc = slots_[static_cast<std::size_t>(c)];
        nc.parent = p;
        nc.prev_sib = np.last_child;
        nc.next_sib = kNone;
        if (np.last_child != kNone)
            slots_[static_cast<std::size_t>(np.last_child)].next_sib = c;
        else
            np.first_child = c;
        np.last_child = c;
        ++np.n_children;
    }

    void detach_slot(std::int64_t s) {
        Slot& nv = slots_[static_cast<std::size_t>(s)];
        Slot& np = slots_[static_cast<std::size_t>(nv.parent)];
        if (nv.prev_sib != kNone)
            slots_[static_cast<std::size_t>(nv.prev_sib)].next_sib = nv.next_sib;
        else
            np.first_child = nv.next_sib;
        if (nv.next_sib != kNone)
            slots_[static_cast<std::size_t>(nv.next_sib)].prev_sib = nv.prev_sib;
        else
            np.last_child = nv.prev_sib;
        --np.n_children;
        nv.parent = kNone;
        nv.prev_sib = nv.next_sib = kNone;
    }

    std::vector<Slot> slots_;
    std::vector<std::int64_t> slot_of_;  // handle -> slot, -1 when retired
    std::size_t alive_count_ = 0;
    std::uint64_t cut_count_ = 0;
    std::uint64_t inner_split_count_ = 0;
};

/// Simple undirected graph: no self-loops, no parallel edges.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n) : adj_(n) {}

    std::size_t vertex_count() const { return adj_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    EdgeId add_edge(NodeId u, NodeId v) {
        if (u == v) raise(Errc::BadParams, "self-loop at " + std::to_string(u));
        check_vertex(u);
        check_vertex(v);
        for (auto [w, e] : adj_[static_cast<std::size_t>(u)])
            if (w == v) raise(Errc::BadParams, "parallel edge " + std::to_string(u) + "-" + std::to_string(v));
        EdgeId id = static_cast<EdgeId>(edges_.size());
        edges_.emplace_back(u, v);
        adj_[static_cast<std::size_t>(u)].emplace_back(v, id);
        adj_[static_cast<std::size_t>(v)].emplace_back(u, id);
        return id;
    }

    const std::vector<std::pair<NodeId, EdgeId>>& neighbors(NodeId v) const {
        check_vertex(v);
        return adj_[static_cast<std::size_t>(v)];
    }

    std::pair<NodeId, NodeId> edge(EdgeId e) const {
        if (e < 0 || static_cast<std::size_t>(e) >= edges_.size()) raise(Errc::BadParams, "edge id");
        return edges_[static_cast<std::size_t>(e)];
    }

    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

    bool connected() const {
        if (adj_.empty()) return true;
        std::vector<char> seen(adj_.size(), 0);
        std::vector<NodeId> stack{0};
        seen[0] = 1;
        std::size_t cnt = 1;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (auto [w, e] : adj_[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++cnt;
                    stack.push_back(w);
                }
        }
        return cnt == adj_.size();
    }

private:
    void check_vertex(NodeId v) const {
        if (v < 0 || static_cast<std::size_t>(v) >= adj_.size())
            raise(Errc::BadParams, "vertex out of range: " + std::to_string(v));
    }

    std::vector<std::vector<std::pair<NodeId, EdgeId>>> adj_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
};

}  // namespace dtm
