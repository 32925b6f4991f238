#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/detail/treap_ett.hpp"
#include "dtm/forest.hpp"
#include "dtm/oracle.hpp"

namespace dtm {

/// Value policy: component minima of oracle-compared priorities. The value
/// is a PriorityRef; sentinel comparisons are free, so components whose
/// stored values are all infinity cost nothing to aggregate.
struct MinValuePolicy {
    PriorityOracle* oracle = nullptr;
    using Value = PriorityRef;
    Value identity() const { return PriorityRef::top_inf(); }
    Value combine(const Value& a, const Value& b) const {
        if (oracle->less(b, a)) return b;
        if (a.node == kNoNode) return b;  // equal sentinels: prefer a carrier
        return a;
    }
    void rebind(Value&, NodeId) const {}
};

/// Value policy: integer-labeled minima (used for extremal leaves; never
/// touches the priority oracle). The carrier node follows relabels.
struct LabelMinPolicy {
    static constexpr bool kRebindNeedsRefresh = true;
    struct Value {
        std::int64_t label = INT64_MAX;
        NodeId node = kNoNode;
    };
    Value identity() const { return {}; }
    Value combine(const Value& a, const Value& b) const { return b.label < a.label ? b : a; }
    void rebind(Value& v, NodeId n) const {
        if (v.node != kNoNode) v.node = n;
    }
};

/// Value policy: commutative semigroup sums; excluded nodes store nullopt.
template <class Semigroup>
struct SumValuePolicy {
    Semigroup sg;
    using Value = std::optional<typename Semigroup::Value>;
    Value identity() const { return std::nullopt; }
    Value combine(const Value& a, const Value& b) const {
        if (!a) return b;
        if (!b) return a;
        return sg.combine(*a, *b);
    }
    void rebind(Value&, NodeId) const {}
};

/// Dynamic forest with component aggregates: cut, split, set-priority, and
/// component-aggregate reads served from a per-root cache. The cache is
/// refreshed with at most two internal aggregate queries per mutation, and
/// splitting a root or a leaf does no aggregate recomputation at all. The
/// structural mirror is slot-indirected so split never walks child lists.
template <class Policy>
class DynamicForest {
public:
    using Value = typename Policy::Value;

    DynamicForest(const RootedForest& f, const std::vector<Value>& values, Policy policy)
        : policy_(policy), ett_(policy) {
        const std::size_t cap = f.capacity();
        slot_of_.assign(cap, -1);
        cache_.assign(cap, policy_.identity());
        ett_.init_from(f, &values);
        slots_.resize(cap);
        for (NodeId v : f.alive_nodes()) {
            std::size_t s = static_cast<std::size_t>(v);
            slot_of_[s] = static_cast<std::int64_t>(s);
            slots_[s].owner = v;
            slots_[s].n_children = f.child_count(v);
            NodeId p = f.parent(v);
            slots_[s].parent = p == kNoNode ? -1 : static_cast<std::int64_t>(p);
        }
        for (NodeId r : f.roots()) cache_[static_cast<std::size_t>(r)] = ett_.component_aggregate(r);
    }

    bool alive(NodeId v) const {
        return v >= 0 && static_cast<std::size_t>(v) < slot_of_.size() && slot_of_[static_cast<std::size_t>(v)] >= 0;
    }
    NodeId parent(NodeId v) const {
        std::int64_t p = slots_[slot(v)].parent;
        return p < 0 ? kNoNode : slots_[static_cast<std::size_t>(p)].owner;
    }
    bool is_root(NodeId v) const { return slots_[slot(v)].parent < 0; }
    bool is_leaf(NodeId v) const { return slots_[slot(v)].n_children == 0; }

    const Value& value(NodeId v) const {
        check(v);
        return ett_.value(v);
    }

    /// Component aggregate of v's tree: root lookup plus a cache read.
    Value tree_aggregate(NodeId v) {
        check(v);
        NodeId r = ett_.component_root(v);
        return cache_[static_cast<std::size_t>(r)];
    }

    /// Component aggregate read straight off the tour (no root cache). Label
    /// policies use this: cached label carriers may lag behind relabels while
    /// the tour's own values never do.
    Value tree_aggregate_direct(NodeId v) {
        check(v);
        return ett_.component_aggregate(v);
    }

    NodeId component_root(NodeId v) {
        check(v);
        return ett_.component_root(v);
    }

    void set_value(NodeId v, const Value& val) {
        check(v);
        ett_.set_value(v, val);
        refresh_cache(ett_.component_root(v));
    }

    void cut(NodeId v) {
        std::size_t s = static_cast<std::size_t>(slot(v));
        std::int64_t ps = slots_[s].parent;
        if (ps < 0) raise(Errc::IsRoot, "cut of root " + std::to_string(v));
        NodeId r = ett_.component_root(v);
        ett_.cut(v);
        slots_[s].parent = -1;
        --slots_[static_cast<std::size_t>(ps)].n_children;
        refresh_cache(v);
        refresh_cache(r);
    }

    /// Internal helper: attach root u under v.
    void link(NodeId u, NodeId v) {
        std::size_t su = static_cast<std::size_t>(slot(u));
        std::size_t sv = static_cast<std::size_t>(slot(v));
        if (slots_[su].parent >= 0) raise(Errc::BadParams, "link of non-root");
        ett_.link(u, v);
        slots_[su].parent = static_cast<std::int64_t>(sv);
        ++slots_[sv].n_children;
        refresh_cache(ett_.component_root(v));
    }

    /// Splits v into fresh handles chosen by this structure.
    std::pair<NodeId, NodeId> split(NodeId v) {
        NodeId u1 = static_cast<NodeId>(slot_of_.size());
        NodeId u2 = u1 + 1;
        slot_of_.resize(slot_of_.size() + 2, -1);
        cache_.resize(slot_of_.size(), policy_.identity());
        split_into(v, u1, u2);
        return {u1, u2};
    }

    /// Splits v into caller-supplied fresh handles (keeps several structures
    /// over the same forest handle-aligned). Both new nodes start with v's
    /// stored value. Splitting a root or a leaf does no aggregate queries.
    void split_into(NodeId v, NodeId u1, NodeId u2) {
        std::size_t s = static_cast<std::size_t>(slot(v));
        grow(std::max(u1, u2));
        const Value val = ett_.value(v);
        const bool root = slots_[s].parent < 0;
        const bool leaf = slots_[s].n_children == 0;

        if (root) {
            // u1 inherits no parent: fresh isolated; u2 keeps v's slot
            Value val1 = val;
            policy_.rebind(val1, u1);
            ett_.add_isolated(u1, val1);
            bind_fresh(u1);
            ett_.relabel(v, u2);
            rename(s, v, u2);
            cache_[static_cast<std::size_t>(u1)] = val1;
            cache_[static_cast<std::size_t>(u2)] = cache_[static_cast<std::size_t>(v)];
            return;
        }
        if (leaf) {
            // u1 keeps v's slot (and parent); u2 is fresh and isolated
            ett_.relabel(v, u1);
            rename(s, v, u1);
            Value val2 = val;
            policy_.rebind(val2, u2);
            ett_.add_isolated(u2, val2);
            bind_fresh(u2);
            cache_[static_cast<std::size_t>(u2)] = val2;
            return;
        }
        // general case: detach v's subtree, add fresh child u1 under p,
        // rename v's slot to u2
        std::int64_t ps = slots_[s].parent;
        NodeId p = slots_[static_cast<std::size_t>(ps)].owner;
        NodeId r = ett_.component_root(v);
        ett_.cut(v);
        slots_[s].parent = -1;
        --slots_[static_cast<std::size_t>(ps)].n_children;
        Value val1 = val;
        policy_.rebind(val1, u1);
        ett_.add_isolated(u1, val1);
        bind_fresh(u1);
        ett_.link(u1, p);
        slots_[static_cast<std::size_t>(slot_of_[static_cast<std::size_t>(u1)])].parent = ps;
        ++slots_[static_cast<std::size_t>(ps)].n_children;
        ett_.relabel(v, u2);
        rename(s, v, u2);
        refresh_cache(u2);
        refresh_cache(r);
    }

    std::uint64_t aggregate_queries() const { return agg_queries_; }
    std::uint64_t rotations() const { return ett_.rotations(); }

private:
    struct Slot {
        std::int64_t parent = -1;
        std::size_t n_children = 0;
        NodeId owner = kNoNode;
    };

    void check(NodeId v) const {
        if (!alive(v)) raise(Errc::DeadNode, "node " + std::to_string(v));
    }

    std::int64_t slot(NodeId v) const {
        check(v);
        return slot_of_[static_cast<std::size_t>(v)];
    }

    void grow(NodeId hi) {
        if (static_cast<std::size_t>(hi) >= slot_of_.size()) {
            slot_of_.resize(static_cast<std::size_t>(hi) + 1, -1);
            cache_.resize(static_cast<std::size_t>(hi) + 1, policy_.identity());
        }
    }

    void bind_fresh(NodeId handle) {
        slots_.push_back(Slot{-1, 0, handle});
        slot_of_[static_cast<std::size_t>(handle)] = static_cast<std::int64_t>(slots_.size() - 1);
    }

    void rename(std::size_t s, NodeId old_handle, NodeId new_handle) {
        slots_[s].owner = new_handle;
        slot_of_[static_cast<std::size_t>(new_handle)] = static_cast<std::int64_t>(s);
        slot_of_[static_cast<std::size_t>(old_handle)] = -1;
    }

    void refresh_cache(NodeId any_node_of_component) {
        NodeId r = ett_.component_root(any_node_of_component);
        cache_[static_cast<std::size_t>(r)] = ett_.component_aggregate(r);
        ++agg_queries_;
    }

    Policy policy_;
    detail::TreapEtt<Policy> ett_;
    std::vector<Slot> slots_;
    std::vector<std::int64_t> slot_of_;
    std::vector<Value> cache_;
    std::uint64_t agg_queries_ = 0;
};

}  // namespace dtm
