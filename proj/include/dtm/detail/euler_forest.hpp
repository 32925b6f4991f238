#pragma once

#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/detail/splay.hpp"
#include "dtm/forest.hpp"

namespace dtm::detail {

/// Bracket Euler-tour representation of a rooted forest: each node owns an
/// open and a close element; a component's tour is kept in one splay tree.
/// The value Policy supplies the per-node payload and the aggregate computed
/// over open elements (use NoAggPolicy when only connectivity is needed).
///
/// Policy requirements:
///   using Value;
///   Value identity() const;
///   Value combine(const Value&, const Value&);   // associative
template <class Policy>
class EulerForest {
public:
    using Value = typename Policy::Value;

    struct El {
        El* l = nullptr;
        El* r = nullptr;
        El* p = nullptr;
        NodeId owner = kNoNode;
        bool open = false;
        Value val;
        Value agg;
    };

    struct PullAgg {
        EulerForest* f;
        void operator()(El* x) const {
            Value a = x->l ? x->l->agg : f->policy_.identity();
            if (x->open) a = f->policy_.combine(a, x->val);
            if (x->r) a = f->policy_.combine(a, x->r->agg);
            x->agg = a;
        }
    };

    explicit EulerForest(Policy policy = Policy{}) : policy_(policy), splay_(PullAgg{this}) {}

    EulerForest(const EulerForest&) = delete;
    EulerForest& operator=(const EulerForest&) = delete;

    /// Builds tours for every component of f. When initial values are given,
    /// they are installed before the balanced build, so aggregation costs one
    /// pull per element overall.
    void init_from(const RootedForest& f, const std::vector<Value>* values = nullptr) {
        for (NodeId r : f.roots()) init_component(f, r, values);
    }

    /// Builds the tour of the component rooted at r.
    void init_component(const RootedForest& f, NodeId r, const std::vector<Value>* values = nullptr) {
        std::vector<El*> seq;
        // iterative DFS producing the bracket sequence
        std::vector<std::pair<NodeId, bool>> stack;  // (node, expanded?)
        stack.emplace_back(r, false);
        while (!stack.empty()) {
            auto [v, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                seq.push_back(close_of(v));
                continue;
            }
            ensure(v);
            if (values) open_of(v)->val = (*values)[static_cast<std::size_t>(v)];
            seq.push_back(open_of(v));
            stack.emplace_back(v, true);
            std::vector<NodeId> cs = f.children(v);
            for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.emplace_back(*it, false);
        }
        splay_.build_balanced(seq);
    }

    bool tracked(NodeId v) const {
        return v >= 0 && static_cast<std::size_t>(v) < open_.size() && open_[static_cast<std::size_t>(v)] != nullptr;
    }

    void add_isolated(NodeId v) { ensure(v); }

    void add_isolated(NodeId v, const Value& val) {
        ensure(v);
        set_value(v, val);
    }

    /// Stored value of v (meaningful only with an aggregating policy).
    const Value& value(NodeId v) const { return open_[static_cast<std::size_t>(v)]->val; }

    void set_value(NodeId v, const Value& val) {
        El* o = open_of(v);
        splay_.splay(o);
        o->val = val;
        splay_.refresh(o);
    }

    /// Root of the component containing v (the owner of the tour's first element).
    NodeId component_root(NodeId v) {
        El* f = splay_.first(open_of(v));
        return f->owner;
    }

    /// Aggregate over all nodes of v's component.
    Value component_aggregate(NodeId v) {
        El* o = open_of(v);
        splay_.splay(o);
        return o->agg;
    }

    /// Detaches the subtree of v into its own component. v must not be the
    /// component root (checked by the caller against its parent bookkeeping).
    void cut(NodeId v) {
        El* o = open_of(v);
        El* c = close_of(v);
        El* before = splay_.split_before(o);   // everything left of open_v
        El* after = splay_.split_after(c);     // everything right of close_v
        splay_.join(before, after);            // remaining component
    }

    /// Inserts the component of u (a root) as a child of v: the tour of u is
    /// placed immediately before close_v (child order is not represented).
    void link(NodeId u, NodeId v) {
        El* cv = close_of(v);
        El* before = splay_.split_before(cv);  // tour prefix of v's component
        El* usub = splay_.root_of(open_of(u));
        splay_.join(splay_.join(before, usub), cv);
    }

    /// Renames the owner of v's brackets to u; v's handle is retired.
    /// The policy may rebind the stored value's carrier via rebind().
    void relabel(NodeId v, NodeId u) { relabel_raw(v, u, open_of(v), close_of(v)); }

    /// Extracts the strict inside of v's brackets (the tours of its children)
    /// and hands the brackets over to fresh handles: u1 keeps v's position as
    /// an isolated pair, u2 wraps the extracted child tours. Used by split.
    void split_replace(NodeId v, NodeId u1, NodeId u2) {
        El* o = open_of(v);
        El* c = close_of(v);
        El* before = splay_.split_before(o);
        El* after = splay_.split_after(c);
        // tree now spans [open_v .. close_v]
        El* tail = splay_.split_after(o);      // (open_v, .. close_v]
        El* inner = splay_.split_before(c);    // strict inside; tail now == [close_v]
        (void)tail;
        // u2 wraps the children tours
        ensure(u2);
        El* o2 = open_of(u2);
        El* c2 = close_of(u2);
        splay_.split_after(o2);  // detach c2 from the fresh [o2, c2] pair
        splay_.join(splay_.join(o2, inner), c2);
        // v's brackets become u1's, adjacent to each other, back in place
        splay_.join(splay_.join(before, splay_.join(o, c)), after);
        relabel_raw(v, u1, o, c);
    }

    std::uint64_t rotations() const { return splay_.rotations; }

private:
    // Policies whose stored value embeds the owning handle must refresh the
    // aggregate path on relabel; others rename in O(1) with no splay.
    template <class P>
    static constexpr bool rebind_needs_refresh() {
        if constexpr (requires { P::kRebindNeedsRefresh; })
            return P::kRebindNeedsRefresh;
        else
            return false;
    }

    void relabel_raw(NodeId v, NodeId u, El* o, El* c) {
        if constexpr (rebind_needs_refresh<Policy>()) {
            splay_.splay(o);
            o->owner = u;
            policy_.rebind(o->val, u);
            splay_.refresh(o);
        } else {
            o->owner = u;
        }
        c->owner = u;
        grow(u);
        open_[static_cast<std::size_t>(u)] = o;
        close_[static_cast<std::size_t>(u)] = c;
        open_[static_cast<std::size_t>(v)] = nullptr;
        close_[static_cast<std::size_t>(v)] = nullptr;
    }

    El* open_of(NodeId v) const { return open_[static_cast<std::size_t>(v)]; }
    El* close_of(NodeId v) const { return close_[static_cast<std::size_t>(v)]; }

    void grow(NodeId v) {
        if (static_cast<std::size_t>(v) >= open_.size()) {
            open_.resize(static_cast<std::size_t>(v) + 1, nullptr);
            close_.resize(static_cast<std::size_t>(v) + 1, nullptr);
        }
    }

    void ensure(NodeId v) {
        grow(v);
        if (open_[static_cast<std::size_t>(v)]) return;
        arena_.emplace_back();
        El* o = &arena_.back();
        arena_.emplace_back();
        El* c = &arena_.back();
        o->owner = c->owner = v;
        o->open = true;
        o->val = policy_.identity();
        c->val = policy_.identity();
        // start as the two-element tour [open, close]
        o->r = c;
        c->p = o;
        splay_.refresh(c);
        splay_.refresh(o);
        open_[static_cast<std::size_t>(v)] = o;
        close_[static_cast<std::size_t>(v)] = c;
    }

    Policy policy_;
    Splay<El, PullAgg> splay_;
    std::deque<El> arena_;
    std::vector<El*> open_;
    std::vector<El*> close_;
};

/// Policy for connectivity-only uses.
struct NoAggPolicy {
    struct Value {};
    Value identity() const { return {}; }
    Value combine(const Value&, const Value&) const { return {}; }
    void rebind(Value&, NodeId) const {}
};

}  // namespace dtm::detail
