#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/forest.hpp"

namespace dtm::detail {

/// Bracket Euler-tour forest over a treap. Non-adaptive: every mutation costs
/// expected Theta(log n) regardless of the access pattern, and queries
/// (component root, component aggregate) only walk pointers — they never
/// rebalance and never recompute aggregates.
template <class Policy>
class TreapEtt {
public:
    using Value = typename Policy::Value;

    explicit TreapEtt(Policy policy) : policy_(policy), rng_(0x5eed5eed) {}

    TreapEtt(const TreapEtt&) = delete;
    TreapEtt& operator=(const TreapEtt&) = delete;

    struct El {
        El* l = nullptr;
        El* r = nullptr;
        El* p = nullptr;
        std::uint64_t heat = 0;  // treap priority
        std::size_t size = 1;
        NodeId owner = kNoNode;
        bool open = false;
        Value val;
        Value agg;
    };

    void init_from(const RootedForest& f, const std::vector<Value>* values = nullptr) {
        for (NodeId r : f.roots()) {
            std::vector<El*> seq;
            std::vector<std::pair<NodeId, bool>> stack{{r, false}};
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
            build_from_sequence(seq);
        }
    }

    void add_isolated(NodeId v, const Value& val) {
        ensure(v);
        El* o = open_of(v);
        El* c = close_of(v);
        o->val = val;
        pull(o);
        pull(c);
        merge(o, c);
    }

    const Value& value(NodeId v) const { return open_of(v)->val; }

    void set_value(NodeId v, const Value& val) {
        El* o = open_of(v);
        o->val = val;
        for (El* x = o; x; x = x->p) pull(x);
    }

    /// Owner of the tour's first element. Pointer walk only.
    NodeId component_root(NodeId v) const {
        El* x = top_of(open_of(v));
        while (x->l) x = x->l;
        return x->owner;
    }

    /// Aggregate over v's component. Pointer walk only.
    const Value& component_aggregate(NodeId v) const { return top_of(open_of(v))->agg; }

    /// Detaches the subtree tour [open_v .. close_v] into its own component.
    void cut(NodeId v) {
        El* o = open_of(v);
        El* c = close_of(v);
        auto [a, bc] = split(top_of(o), position(o));
        auto [b, rest] = split(bc, position(c) + 1);
        (void)b;  // b is the detached component
        merge(a, rest);
    }

    /// Inserts the component of u (a root) immediately before close_v.
    void link(NodeId u, NodeId v) {
        El* cv = close_of(v);
        auto [a, b] = split(top_of(cv), position(cv));
        El* ut = top_of(open_of(u));
        merge(merge(a, ut), b);
    }

    /// Renames the owner of v's brackets to u.
    void relabel(NodeId v, NodeId u) { relabel_raw(v, u); }

    /// Extracts the strict inside of v's brackets into fresh u2 brackets and
    /// leaves v's brackets (renamed to u1) adjacent in place.
    void split_replace(NodeId v, NodeId u1, NodeId u2) {
        El* o = open_of(v);
        El* c = close_of(v);
        auto [a, bc] = split(top_of(o), position(o));
        auto [mid, rest] = split(bc, position(c) + 1);
        auto [ofirst, tail] = split(mid, 1);
        auto [inner, clast] = split(tail, size_of(tail) - 1);
        ensure(u2);
        El* o2 = open_of(u2);
        El* c2 = close_of(u2);
        pull(o2);
        pull(c2);
        merge(merge(o2, inner), c2);
        merge(merge(a, merge(ofirst, clast)), rest);
        relabel_raw(v, u1);
    }

    std::uint64_t rotations() const { return pulls_; }

private:
    template <class P>
    static constexpr bool rebind_needs_refresh() {
        if constexpr (requires { P::kRebindNeedsRefresh; })
            return P::kRebindNeedsRefresh;
        else
            return false;
    }

    void relabel_raw(NodeId v, NodeId u) {
        El* o = open_of(v);
        El* c = close_of(v);
        o->owner = u;
        c->owner = u;
        if constexpr (rebind_needs_refresh<Policy>()) {
            policy_.rebind(o->val, u);
            for (El* x = o; x; x = x->p) pull(x);
        }
        grow(u);
        open_[static_cast<std::size_t>(u)] = o;
        close_[static_cast<std::size_t>(u)] = c;
        open_[static_cast<std::size_t>(v)] = nullptr;
        close_[static_cast<std::size_t>(v)] = nullptr;
    }

    static std::size_t size_of(El* x) { return x ? x->size : 0; }

    void pull(El* x) {
        ++pulls_;
        x->size = 1 + size_of(x->l) + size_of(x->r);
        Value a = x->l ? x->l->agg : policy_.identity();
        if (x->open) a = policy_.combine(a, x->val);
        if (x->r) a = policy_.combine(a, x->r->agg);
        x->agg = a;
    }

    static El* top_of(El* x) {
        while (x->p) x = x->p;
        return x;
    }

    /// 0-based position of x within its tree, via size fields.
    std::size_t position(El* x) const {
        std::size_t pos = size_of(x->l);
        for (El* w = x; w->p; w = w->p)
            if (w->p->r == w) pos += size_of(w->p->l) + 1;
        return pos;
    }

    /// Splits off the first k elements; returns (left, right) roots.
    std::pair<El*, El*> split(El* t, std::size_t k) {
        if (!t) return {nullptr, nullptr};
        if (size_of(t->l) >= k) {
            El* tl = t->l;
            if (tl) tl->p = nullptr;
            t->l = nullptr;
            auto [a, b] = split(tl, k);
            t->l = b;
            if (b) b->p = t;
            pull(t);
            t->p = nullptr;
            return {a, t};
        }
        El* tr = t->r;
        if (tr) tr->p = nullptr;
        t->r = nullptr;
        auto [a, b] = split(tr, k - size_of(t->l) - 1);
        t->r = a;
        if (a) a->p = t;
        pull(t);
        t->p = nullptr;
        return {t, b};
    }

    El* merge(El* a, El* b) {
        if (!a) return b;
        if (!b) return a;
        if (a->heat > b->heat) {
            El* ar = a->r;
            if (ar) ar->p = nullptr;
            a->r = merge(ar, b);
            a->r->p = a;
            pull(a);
            return a;
        }
        El* bl = b->l;
        if (bl) bl->p = nullptr;
        b->l = merge(a, bl);
        b->l->p = b;
        pull(b);
        return b;
    }

    /// Linear-time treap construction from an in-order sequence via the
    /// rightmost-spine stack, followed by one bottom-up pull pass.
    El* build_from_sequence(const std::vector<El*>& seq) {
        if (seq.empty()) return nullptr;
        std::vector<El*> spine;
        for (El* x : seq) {
            El* last = nullptr;
            while (!spine.empty() && spine.back()->heat < x->heat) {
                last = spine.back();
                spine.pop_back();
            }
            x->l = last;
            if (last) last->p = x;
            if (!spine.empty()) {
                spine.back()->r = x;
                x->p = spine.back();
            } else {
                x->p = nullptr;
            }
            spine.push_back(x);
        }
        El* root = spine.front();
        std::vector<std::pair<El*, bool>> stack{{root, false}};
        while (!stack.empty()) {
            auto [x, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                pull(x);
                continue;
            }
            stack.push_back({x, true});
            if (x->l) stack.push_back({x->l, false});
            if (x->r) stack.push_back({x->r, false});
        }
        return root;
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
        o->heat = rng_();
        c->heat = rng_();
        o->val = policy_.identity();
        o->agg = policy_.identity();
        c->val = policy_.identity();
        c->agg = policy_.identity();
        open_[static_cast<std::size_t>(v)] = o;
        close_[static_cast<std::size_t>(v)] = c;
    }

    Policy policy_;
    std::mt19937_64 rng_;
    std::deque<El> arena_;
    std::vector<El*> open_;
    std::vector<El*> close_;
    std::uint64_t pulls_ = 0;
};

}  // namespace dtm::detail
