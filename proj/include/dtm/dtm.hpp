#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dtm/compression.hpp"
#include "dtm/core.hpp"
#include "dtm/detail/treap_ett.hpp"
#include "dtm/dynamic_forest.hpp"
#include "dtm/extremal_leaves.hpp"
#include "dtm/forest.hpp"
#include "dtm/oracle.hpp"
#include "dtm/path_engine.hpp"
#include "dtm/ssm.hpp"
#include "dtm/tree_roots.hpp"

namespace dtm {

/// Aggregation traits for the composed structure, minimum mode.
struct UoMinTraits {
    PriorityOracle* oracle = nullptr;
    using Value = PriorityRef;
    using PathEngine = PathDtm;
    using DfPolicy = MinValuePolicy;

    PathEngine make_path_engine(const RootedForest& fc) const { return PathEngine(fc, *oracle); }
    Value path_value(PathEngine& r, NodeId v) const { return r.tree_min_ref(v); }
    void path_cut(PathEngine& r, NodeId v) const { r.cut(v); }
    Value identity() const { return PriorityRef::top_inf(); }
    Value combine(const Value& a, const Value& b) const {
        if (oracle->less(b, a)) return b;
        if (a.node == kNoNode) return b;
        return a;
    }
    DfPolicy df_policy() const { return DfPolicy{oracle}; }
};

/// Aggregation traits, commutative semigroup mode. Weights are per original
/// node; excluded super-nodes contribute nothing (nullopt).
template <class Semigroup>
struct UoSumTraits {
    Semigroup sg;
    const std::vector<typename Semigroup::Value>* weights = nullptr;
    using Value = std::optional<typename Semigroup::Value>;
    using PathEngine = PathSemigroupSums<Semigroup>;
    using DfPolicy = SumValuePolicy<Semigroup>;

    PathEngine make_path_engine(const RootedForest& fc) const { return PathEngine(fc, *weights, sg); }
    Value path_value(PathEngine& r, NodeId v) const { return r.tree_sum(v); }
    void path_cut(PathEngine& r, NodeId v) const { r.cut(v); }
    Value identity() const { return std::nullopt; }
    Value combine(const Value& a, const Value& b) const {
        if (!a) return b;
        if (!b) return a;
        return Value(sg.combine(*a, *b));
    }
    DfPolicy df_policy() const { return DfPolicy{sg}; }
};

/// Per-run canonical-event accounting.
struct DtmOpStats {
    std::uint64_t canonical_cuts = 0;
    std::uint64_t splits_of_root = 0;
    std::uint64_t splits_of_leaf = 0;
    std::uint64_t splits_of_inner = 0;
    std::uint64_t tree_min_queries = 0;
    std::uint64_t cuts = 0;
};

/// The composed decremental structure: a maximal-chain compression, a
/// path engine on the chain forest, a dynamic forest on the super-forest
/// (roots and leaves excluded), extremal-leaves bookkeeping, and one
/// splittable leaf sequence per super-component of size at least two.
/// Component aggregates merge the three sources: root chain, inner
/// super-nodes, and the leaf sequence.
template <class Traits>
class BasicUoDtm {
public:
    using Value = typename Traits::Value;

    BasicUoDtm(RootedForest tree, Traits traits)
        : traits_(traits),
          comp_(std::move(tree)),
          r_(traits_.make_path_engine(comp_.chain_forest_view())),
          d_(make_dynamic_forest()),
          e_(comp_.super_forest()) {
        initial_leaves_ = 0;
        for (NodeId v : comp_.forest().alive_nodes())
            if (comp_.forest().is_leaf(v)) ++initial_leaves_;
        ssm_ = std::make_unique<SsmUniverse<LeafSeqPolicy>>(LeafSeqPolicy{this});
        const RootedForest& fp = comp_.super_forest();
        super_top_.assign(fp.capacity(), kNoNode);
        for (NodeId x : fp.alive_nodes()) super_top_[static_cast<std::size_t>(x)] = comp_.top_of(x);
        for (NodeId x : fp.roots()) {
            if (fp.is_leaf(x)) continue;  // single super-node component
            std::vector<SuperNodeId> leaves;
            for (NodeId s : fp.subtree(x))
                if (fp.is_leaf(s)) leaves.push_back(s);
            leaf_seq_.emplace(x, ssm_->build(leaves));
        }
    }

    BasicUoDtm(const BasicUoDtm&) = delete;
    BasicUoDtm& operator=(const BasicUoDtm&) = delete;

    /// Aggregate over v's component: root chain, leaf sequence, inner nodes.
    Value tree_value(NodeId v) {
        ++stats_.tree_min_queries;
        NodeId r = comp_.root_of(v);
        Value m = traits_.path_value(r_, r);
        SuperNodeId x = comp_.super_of(r);
        auto it = leaf_seq_.find(x);
        if (it != leaf_seq_.end()) m = traits_.combine(m, ssm_->aggregate(it->second));
        m = traits_.combine(m, d_.tree_aggregate(x));
        return m;
    }

    void cut(NodeId v) {
        ++stats_.cuts;
        NodeId u = comp_.forest().parent(v);
        if (u == kNoNode) raise(Errc::IsRoot, "cut of root " + std::to_string(v));

        NodeId r0 = comp_.root_of(v);
        SuperNodeId x = comp_.super_of(r0);               // super-root of the component
        SuperNodeId yp = comp_.super_of(u);               // super of the parent side
        const bool y_was_root = comp_.super_of(v) == x;

        CanonicalOp op = comp_.cut(v);

        if (op.kind == CanonicalOp::Kind::Split) {
            // the retiring super keeps its stale top entry: a leaf-sequence
            // splay may still read it mid-update, and at that moment the path
            // engine already answers the upper chain part through it
            grow_tops(op.y2);
            super_top_[static_cast<std::size_t>(op.y1)] = comp_.top_of(op.y1);
            super_top_[static_cast<std::size_t>(op.y2)] = comp_.top_of(op.y2);
            traits_.path_cut(r_, v);
            handle_split(op, x, y_was_root);
        } else {
            handle_cut(op.target, x, yp);
        }
    }

    const Compression& compression() const { return comp_; }
    const DtmOpStats& stats() const { return stats_; }
    std::size_t initial_leaves() const { return initial_leaves_; }

    /// Chain aggregate of super-node x, read through the path engine.
    Value super_leaf_value(SuperNodeId x) {
        return traits_.path_value(r_, super_top_[static_cast<std::size_t>(x)]);
    }

private:
    struct LeafSeqPolicy {
        BasicUoDtm* owner;
        using Value = typename Traits::Value;
        Value leaf_value(NodeId x) const { return owner->super_leaf_value(x); }
        Value combine(const Value& a, const Value& b) const { return owner->traits_.combine(a, b); }
    };
    using LeafSeq = SsmUniverse<LeafSeqPolicy>;
    using Instance = typename LeafSeq::Instance;

    DynamicForest<typename Traits::DfPolicy> make_dynamic_forest() {
        const RootedForest& fp = comp_.super_forest();
        std::vector<Value> values(fp.capacity(), traits_.identity());
        for (NodeId x : fp.alive_nodes()) {
            if (fp.is_root(x) || fp.is_leaf(x)) continue;  // excluded: covered by R or L
            values[static_cast<std::size_t>(x)] = traits_.path_value(r_, comp_.top_of(x));
        }
        return DynamicForest<typename Traits::DfPolicy>(fp, values, traits_.df_policy());
    }

    /// Canonical split(x_old) -> (y1, y2); y1 is always a (possibly isolated)
    /// leaf and y2 a root afterwards, so both are excluded from D.
    void handle_split(const CanonicalOp& op, SuperNodeId comp_root, bool y_was_root) {
        const SuperNodeId x_old = op.target;
        const SuperNodeId y1 = op.y1;
        const SuperNodeId y2 = op.y2;
        const bool was_root = y_was_root;
        const bool was_leaf = d_.is_leaf(x_old);

        e_.split(x_old, y1, y2);
        d_.split_into(x_old, y1, y2);

        if (was_root && was_leaf) {
            ++stats_.splits_of_root;  // isolated super: counts as a root split
            return;                   // two singletons; no leaf sequences involved
        }
        if (was_root) {
            ++stats_.splits_of_root;
            auto it = leaf_seq_.find(x_old);
            if (it != leaf_seq_.end()) {
                Instance moved = it->second;
                leaf_seq_.erase(it);
                leaf_seq_.emplace(y2, moved);
            }
            return;
        }
        if (was_leaf) {
            ++stats_.splits_of_leaf;
            auto it = leaf_seq_.find(comp_root);
            if (it != leaf_seq_.end()) ssm_->replace(it->second, x_old, y1);
            return;
        }
        ++stats_.splits_of_inner;
        // exclude the two new super-nodes from D (they inherited a live value)
        d_.set_value(y1, traits_.identity());
        d_.set_value(y2, traits_.identity());
        auto [z1, z2] = e_.extremal(y2);
        auto it = leaf_seq_.find(comp_root);
        auto [l1, l2] = ssm_->split_interval(std::move(it->second), z1, z2, y1);
        leaf_seq_.erase(it);
        leaf_seq_.emplace(comp_root, l1);
        leaf_seq_.emplace(y2, l2);
    }

    /// Canonical cut of child super y: split the leaf sequence around y's
    /// subtree; re-home the parent super if it just became a leaf.
    void handle_cut(SuperNodeId y, SuperNodeId comp_root, SuperNodeId yp) {
        ++stats_.canonical_cuts;
        const bool y_was_leaf = d_.is_leaf(y);

        e_.cut(y);
        d_.cut(y);

        // y is now a super-root; exclude it from D if it carried a value
        if (!y_was_leaf) d_.set_value(y, traits_.identity());

        auto it = leaf_seq_.find(comp_root);
        if (it == leaf_seq_.end()) return;  // component had a single super-node? cannot happen

        auto [z1, z2] = e_.extremal(y);

        const bool parent_now_leaf = d_.is_leaf(yp);
        NodeId insert = kNoNode;
        if (parent_now_leaf && yp != comp_root) {
            // the parent side super just lost its last child: it joins the
            // leaf sequence exactly where the removed span was
            insert = yp;
            d_.set_value(yp, traits_.identity());
        }
        auto [l1, l2] = ssm_->split_interval(std::move(it->second), z1, z2, insert);
        leaf_seq_.erase(comp_root);
        if (l1.valid())
            leaf_seq_.emplace(comp_root, l1);
        else
            ssm_->discard(std::move(l1));
        if (y_was_leaf) {
            ssm_->discard(std::move(l2));  // singleton component: covered by R
        } else {
            leaf_seq_.emplace(y, l2);
        }
    }

    void grow_tops(SuperNodeId hi) {
        if (static_cast<std::size_t>(hi) >= super_top_.size())
            super_top_.resize(static_cast<std::size_t>(hi) + 1, kNoNode);
    }

    Traits traits_;
    Compression comp_;
    typename Traits::PathEngine r_;
    DynamicForest<typename Traits::DfPolicy> d_;
    ExtremalLeaves e_;
    std::unique_ptr<LeafSeq> ssm_;
    std::unordered_map<SuperNodeId, Instance> leaf_seq_;
    std::vector<NodeId> super_top_;  // like t(x), but retired entries linger
    DtmOpStats stats_;
    std::size_t initial_leaves_ = 0;
};

/// Universally efficient decremental tree minima over a vertex-prioritized
/// forest. Queries return the minimum-priority vertex of a component.
class UoDtm {
public:
    UoDtm(RootedForest tree, PriorityOracle& oracle)
        : impl_(std::move(tree), UoMinTraits{&oracle}) {}

    NodeId tree_min(NodeId v) {
        PriorityRef m = impl_.tree_value(v);
        return m.node;
    }
    PriorityRef tree_min_ref(NodeId v) { return impl_.tree_value(v); }
    void cut(NodeId v) { impl_.cut(v); }

    const Compression& compression() const { return impl_.compression(); }
    const DtmOpStats& stats() const { return impl_.stats(); }
    std::size_t initial_leaves() const { return impl_.initial_leaves(); }

private:
    BasicUoDtm<UoMinTraits> impl_;
};

/// Semigroup-sum variant: tree_sum(v) returns the sum of all weights in v's
/// component. The semigroup needs no identity element.
template <class Semigroup>
class SemigroupDtm {
public:
    using S = typename Semigroup::Value;

    SemigroupDtm(RootedForest tree, std::vector<S> weights, Semigroup sg = {})
        : weights_(std::move(weights)),
          impl_(std::move(tree), UoSumTraits<Semigroup>{sg, &weights_}) {}

    S tree_sum(NodeId v) {
        auto m = impl_.tree_value(v);
        if (!m) raise(Errc::Empty, "empty component sum");
        return *m;
    }
    void cut(NodeId v) { impl_.cut(v); }

    const DtmOpStats& stats() const { return impl_.stats(); }

private:
    std::vector<S> weights_;
    BasicUoDtm<UoSumTraits<Semigroup>> impl_;
};

/// The O(m log n + n) baseline: one dynamic forest over the input, nothing
/// else. Backed by a treap tour so every operation genuinely costs
/// Theta(log n), independent of the access pattern, plus the per-root
/// minimum cache for queries.
class NaiveDtm {
public:
    NaiveDtm(const RootedForest& tree, PriorityOracle& oracle)
        : ett_(MinValuePolicy{&oracle}) {
        std::vector<PriorityRef> values(tree.capacity(), PriorityRef::top_inf());
        parent_.assign(tree.capacity(), kNoNode);
        cache_.assign(tree.capacity(), PriorityRef::top_inf());
        for (NodeId v : tree.alive_nodes()) {
            parent_[static_cast<std::size_t>(v)] = tree.parent(v);
            values[static_cast<std::size_t>(v)] = oracle.ref(v);
        }
        ett_.init_from(tree, &values);
        for (NodeId r : tree.roots()) cache_[static_cast<std::size_t>(r)] = ett_.component_aggregate(r);
    }

    NodeId tree_min(NodeId v) { return cache_[static_cast<std::size_t>(ett_.component_root(v))].node; }
    PriorityRef tree_min_ref(NodeId v) { return cache_[static_cast<std::size_t>(ett_.component_root(v))]; }

    void cut(NodeId v) {
        if (parent_[static_cast<std::size_t>(v)] == kNoNode) raise(Errc::IsRoot, "cut of root");
        NodeId r = ett_.component_root(v);
        ett_.cut(v);
        parent_[static_cast<std::size_t>(v)] = kNoNode;
        cache_[static_cast<std::size_t>(v)] = ett_.component_aggregate(v);
        cache_[static_cast<std::size_t>(r)] = ett_.component_aggregate(r);
    }

private:
    detail::TreapEtt<MinValuePolicy> ett_;
    std::vector<NodeId> parent_;
    std::vector<PriorityRef> cache_;
};

/// Edge-weighted decremental tree minima: subdivides every edge with a
/// carrier vertex holding the edge priority, gives original vertices ordered
/// sentinels, and runs the vertex structure on the result. A cut deletes the
/// two subdivided edges around the carrier. Edges are identified by their
/// child endpoint in the rooted input tree.
class Edtm {
public:
    /// edge_rank[u] is the hidden rank of the edge from u to its parent
    /// (ignored for roots). Ranks must be distinct.
    Edtm(const RootedForest& tree, const std::vector<std::int64_t>& edge_rank)
        : n_(tree.capacity()) {
        carrier_.assign(n_, kNoNode);
        std::vector<NodeId> parents;
        parents.assign(n_, kNoNode);
        NodeId next = static_cast<NodeId>(n_);
        for (NodeId v : tree.alive_nodes()) {
            if (tree.parent(v) == kNoNode) continue;
            carrier_[static_cast<std::size_t>(v)] = next++;
        }
        parents.resize(static_cast<std::size_t>(next), kNoNode);
        edge_of_.assign(static_cast<std::size_t>(next), kNoNode);
        for (NodeId v : tree.alive_nodes()) {
            NodeId p = tree.parent(v);
            if (p == kNoNode) continue;
            NodeId ve = carrier_[static_cast<std::size_t>(v)];
            parents[static_cast<std::size_t>(v)] = ve;
            parents[static_cast<std::size_t>(ve)] = p;
            edge_of_[static_cast<std::size_t>(ve)] = v;
        }
        oracle_ = std::make_unique<PriorityOracle>();
        for (NodeId v : tree.alive_nodes()) {
            oracle_->assign_vertex_sentinel(v, v);
            NodeId ve = carrier_[static_cast<std::size_t>(v)];
            if (ve != kNoNode) oracle_->assign_finite(ve, edge_rank[static_cast<std::size_t>(v)]);
        }
        impl_ = std::make_unique<UoDtm>(RootedForest::build(parents), *oracle_);
    }

    /// Minimum-priority edge in v's component, or kNoNode when the component
    /// has no edges. Edges are named by their child endpoint.
    NodeId tree_min_edge(NodeId v) {
        PriorityRef m = impl_->tree_min_ref(v);
        if (!m.is_finite()) return kNoNode;
        return edge_of_[static_cast<std::size_t>(m.node)];
    }

    /// Deletes the edge from v to its parent.
    void cut(NodeId v) {
        NodeId ve = carrier_[static_cast<std::size_t>(v)];
        if (ve == kNoNode) raise(Errc::IsRoot, "edge cut at root " + std::to_string(v));
        impl_->cut(v);
        impl_->cut(ve);
        carrier_[static_cast<std::size_t>(v)] = kNoNode;
    }

    PriorityOracle& oracle() { return *oracle_; }

private:
    std::size_t n_;
    std::vector<NodeId> carrier_;  // child endpoint -> subdivision vertex
    std::vector<NodeId> edge_of_;  // subdivision vertex -> child endpoint
    std::unique_ptr<PriorityOracle> oracle_;
    std::unique_ptr<UoDtm> impl_;
};

/// Edge-weighted semigroup sums, available when the semigroup has an
/// identity: subdivision carriers hold edge weights, original vertices hold
/// the identity.
template <class Semigroup>
class EdgeSemigroupDtm {
public:
    using S = typename Semigroup::Value;

    EdgeSemigroupDtm(const RootedForest& tree, const std::vector<S>& edge_weight, S identity, Semigroup sg = {})
        : n_(tree.capacity()) {
        carrier_.assign(n_, kNoNode);
        std::vector<NodeId> parents(n_, kNoNode);
        NodeId next = static_cast<NodeId>(n_);
        for (NodeId v : tree.alive_nodes())
            if (tree.parent(v) != kNoNode) carrier_[static_cast<std::size_t>(v)] = next++;
        parents.resize(static_cast<std::size_t>(next), kNoNode);
        std::vector<S> weights(static_cast<std::size_t>(next), identity);
        for (NodeId v : tree.alive_nodes()) {
            NodeId p = tree.parent(v);
            if (p == kNoNode) continue;
            NodeId ve = carrier_[static_cast<std::size_t>(v)];
            parents[static_cast<std::size_t>(v)] = ve;
            parents[static_cast<std::size_t>(ve)] = p;
            weights[static_cast<std::size_t>(ve)] = edge_weight[static_cast<std::size_t>(v)];
        }
        impl_ = std::make_unique<SemigroupDtm<Semigroup>>(RootedForest::build(parents), std::move(weights), sg);
    }

    S tree_sum(NodeId v) { return impl_->tree_sum(v); }

    void cut(NodeId v) {
        NodeId ve = carrier_[static_cast<std::size_t>(v)];
        if (ve == kNoNode) raise(Errc::IsRoot, "edge cut at root " + std::to_string(v));
        impl_->cut(v);
        impl_->cut(ve);
        carrier_[static_cast<std::size_t>(v)] = kNoNode;
    }

private:
    std::size_t n_;
    std::vector<NodeId> carrier_;
    std::unique_ptr<SemigroupDtm<Semigroup>> impl_;
};

}  // namespace dtm
