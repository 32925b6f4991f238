#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/detail/splay.hpp"

namespace dtm {

/// Splittable sequence aggregates over a universe of elements that share one
/// arena and element map. An Instance is a handle to one splay tree; a
/// split-interval consumes its input instance and hands out two new handles.
///
/// Policy requirements:
///   using Value;
///   Value leaf_value(NodeId elem);            // recomputable in O(1)
///   Value combine(const Value&, const Value&);
/// Aggregates are refreshed on every rotation/attach/detach, so reading the
/// sequence aggregate is a constant-time root access.
template <class Policy>
class SsmUniverse {
public:
    using Value = typename Policy::Value;

    struct Node {
        Node* l = nullptr;
        Node* r = nullptr;
        Node* p = nullptr;
        Node* pred = nullptr;
        Node* succ = nullptr;
        NodeId elem = kNoNode;
        Value agg;
    };

    class Instance {
    public:
        Instance() = default;
        bool valid() const { return root_ != nullptr; }

    private:
        friend class SsmUniverse;
        explicit Instance(Node* r) : root_(r) {}
        Node* root_ = nullptr;
    };

    explicit SsmUniverse(Policy policy) : policy_(policy), splay_(Pull{this}) {}

    /// Builds an instance over `elements` in order. The initial tree shape is
    /// complete (balanced), which keeps the initial potential linear.
    Instance build(const std::vector<NodeId>& elements) {
        std::vector<Node*> nodes;
        nodes.reserve(elements.size());
        for (NodeId e : elements) {
            if (where_.count(e)) raise(Errc::DuplicateElement, "element " + std::to_string(e));
            nodes.push_back(fresh(e));
        }
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            nodes[i]->succ = nodes[i + 1];
            nodes[i + 1]->pred = nodes[i];
        }
        return Instance(splay_.build_balanced(nodes));
    }

    /// Aggregate of the whole sequence; O(1), zero comparisons.
    Value aggregate(const Instance& inst) const {
        if (!inst.valid()) raise(Errc::Empty, "aggregate of empty sequence");
        return inst.root_->agg;
    }

    bool contains(NodeId elem) const { return where_.count(elem) != 0; }

    /// Replaces element x by y in place: splays x to the root and renames it.
    void replace(Instance& inst, NodeId x, NodeId y) {
        auto it = where_.find(x);
        if (it == where_.end()) raise(Errc::NotPresent, "replace of absent " + std::to_string(x));
        if (where_.count(y)) raise(Errc::AlreadyPresent, "replace by present " + std::to_string(y));
        Node* n = it->second;
        splay_.splay(n);
        inst.root_ = n;
        where_.erase(it);
        n->elem = y;
        where_[y] = n;
        splay_.refresh(n);
    }

    /// split_interval(x, y; z): consumes inst; returns (Y1, Y2) where Y2 is
    /// the interval [x..y] and Y1 is the remainder, with z (if given)
    /// spliced in at the removed position. Predecessor/successor links change
    /// only at the boundary elements x, y, pred(x), succ(y), and z.
    std::pair<Instance, Instance> split_interval(Instance&& inst, NodeId x, NodeId y, NodeId z = kNoNode) {
        Node* nx = find(x);
        Node* ny = find(y);
        splay_.splay(nx);
        if (nx != ny) {
            if (!right_of_root(nx, ny)) raise(Errc::OutOfOrder, "split_interval: y precedes x");
            splay_.splay(ny);  // pays for the order-checking walk
        }
        Node* xp = nx->pred;
        Node* ys = ny->succ;

        // detach the prefix strictly before x
        Node* left = nullptr;   // tree of x_1..x_{i-1}, rooted at xp
        Node* middle = nullptr; // x..end for now
        if (xp) {
            middle = splay_.split_after(xp);
            left = xp;
        } else {
            middle = splay_.root_of(nx);
        }
        // detach the suffix strictly after y
        Node* interval = nullptr;
        Node* right = nullptr;  // tree of x_{j+1}..x_n, rooted at ys
        if (ys) {
            interval = splay_.split_before(ys);
            right = ys;
        } else {
            interval = middle;
        }

        nx->pred = nullptr;
        ny->succ = nullptr;
        Instance y2(splay_.root_of(interval));

        Instance y1;
        if (z != kNoNode) {
            if (where_.count(z)) raise(Errc::AlreadyPresent, "split z present: " + std::to_string(z));
            Node* nz = fresh(z);
            nz->l = left;
            nz->r = right;
            if (left) left->p = nz;
            if (right) right->p = nz;
            splay_.refresh(nz);
            nz->pred = xp;
            nz->succ = ys;
            if (xp) xp->succ = nz;
            if (ys) ys->pred = nz;
            y1 = Instance(nz);
        } else {
            if (xp) xp->succ = ys;
            if (ys) ys->pred = xp;
            Node* joined = splay_.join(left, right);
            y1 = Instance(joined);
        }
        inst.root_ = nullptr;
        return {y1, y2};
    }

    /// Removes an instance from the universe (its elements leave the map).
    void discard(Instance&& inst) {
        if (!inst.valid()) return;
        std::vector<Node*> stack{inst.root_};
        while (!stack.empty()) {
            Node* n = stack.back();
            stack.pop_back();
            if (n->l) stack.push_back(n->l);
            if (n->r) stack.push_back(n->r);
            where_.erase(n->elem);
        }
        inst.root_ = nullptr;
    }

    /// In-order elements (diagnostics and tests).
    std::vector<NodeId> to_vector(const Instance& inst) const {
        std::vector<NodeId> out;
        if (!inst.valid()) return out;
        std::vector<std::pair<Node*, bool>> stack{{inst.root_, false}};
        while (!stack.empty()) {
            auto [n, expanded] = stack.back();
            stack.pop_back();
            if (!n) continue;
            if (expanded) {
                out.push_back(n->elem);
                continue;
            }
            stack.push_back({n->r, false});
            stack.push_back({n, true});
            stack.push_back({n->l, false});
        }
        return out;
    }

    /// Splay-tree structure dump for potential diagnostics:
    /// (elem, parent elem or kNoNode) pairs.
    std::vector<std::pair<NodeId, NodeId>> structure(const Instance& inst) const {
        std::vector<std::pair<NodeId, NodeId>> out;
        if (!inst.valid()) return out;
        std::vector<Node*> stack{inst.root_};
        while (!stack.empty()) {
            Node* n = stack.back();
            stack.pop_back();
            out.emplace_back(n->elem, n->p ? n->p->elem : kNoNode);
            if (n->l) stack.push_back(n->l);
            if (n->r) stack.push_back(n->r);
        }
        return out;
    }

    std::uint64_t rotations() const { return splay_.rotations; }

private:
    struct Pull {
        SsmUniverse* u;
        void operator()(Node* x) const {
            Value a = u->policy_.leaf_value(x->elem);
            if (x->l) a = u->policy_.combine(x->l->agg, a);
            if (x->r) a = u->policy_.combine(a, x->r->agg);
            x->agg = a;
        }
    };

    Node* find(NodeId e) {
        auto it = where_.find(e);
        if (it == where_.end()) raise(Errc::NotPresent, "element " + std::to_string(e));
        return it->second;
    }

    Node* fresh(NodeId e) {
        arena_.emplace_back();
        Node* n = &arena_.back();
        n->elem = e;
        where_[e] = n;
        splay_.refresh(n);
        return n;
    }

    /// With xroot splayed to its tree's root: does y sit strictly right of it?
    bool right_of_root(Node* xroot, Node* y) const {
        Node* w = y;
        while (w->p) {
            if (w->p == xroot) return w == xroot->r;
            w = w->p;
        }
        return false;
    }

    Policy policy_;
    detail::Splay<Node, Pull> splay_;
    std::deque<Node> arena_;
    std::unordered_map<NodeId, Node*> where_;
};

}  // namespace dtm
