#pragma once

#include <cstdint>
#include <vector>

#include "dtm/core.hpp"

namespace dtm {

/// A priority value as the library sees it: either a finite priority owned by
/// a node, a per-vertex sentinel that outranks every finite priority, or the
/// top sentinel that outranks everything. Finite priorities are never
/// materialized as numbers outside the oracle; a PriorityRef stores the node
/// holding the priority instead.
struct PriorityRef {
    enum class Kind : std::uint8_t { Finite, VertexInf, TopInf };

    Kind kind = Kind::TopInf;
    NodeId node = kNoNode;  // holder; meaningful for Finite and VertexInf

    static PriorityRef finite(NodeId v) { return {Kind::Finite, v}; }
    static PriorityRef vertex_inf(NodeId v) { return {Kind::VertexInf, v}; }
    static PriorityRef top_inf(NodeId carrier = kNoNode) { return {Kind::TopInf, carrier}; }

    bool is_finite() const { return kind == Kind::Finite; }
    bool is_sentinel() const { return kind != Kind::Finite; }
    bool is_top() const { return kind == Kind::TopInf; }

    bool operator==(const PriorityRef&) const = default;
};

/// The only gateway for priority comparisons. Holds a hidden injective
/// node -> rank map and counts every comparison between two finite
/// priorities. Comparisons involving a sentinel are resolved for free:
/// finite < any vertex sentinel < top sentinel, and vertex sentinels are
/// ordered among themselves by a fixed vertex ordering.
class PriorityOracle {
public:
    PriorityOracle() = default;

    /// Hidden ranks: ranks[v] is the rank of node v. Nodes may be left
    /// unassigned (rank < 0) and later promoted to vertex sentinels.
    explicit PriorityOracle(std::vector<std::int64_t> ranks) : rank_(std::move(ranks)) {
        tag_.assign(rank_.size(), Tag::Finite);
        for (std::size_t v = 0; v < rank_.size(); ++v)
            if (rank_[v] < 0) tag_[v] = Tag::Unassigned;
    }

    std::size_t size() const { return rank_.size(); }

    void assign_finite(NodeId v, std::int64_t rank) {
        grow(v);
        rank_[static_cast<std::size_t>(v)] = rank;
        tag_[static_cast<std::size_t>(v)] = Tag::Finite;
    }

    /// Marks v as carrying the sentinel priority "infinity_v"; sentinels are
    /// ordered by `order_key` (smaller key = smaller sentinel).
    void assign_vertex_sentinel(NodeId v, std::int64_t order_key) {
        grow(v);
        rank_[static_cast<std::size_t>(v)] = order_key;
        tag_[static_cast<std::size_t>(v)] = Tag::VertexInf;
    }

    /// The canonical PriorityRef for node v (finite or vertex sentinel).
    PriorityRef ref(NodeId v) const {
        if (tag_[static_cast<std::size_t>(v)] == Tag::VertexInf) return PriorityRef::vertex_inf(v);
        return PriorityRef::finite(v);
    }

    /// p(a) < p(b). Counts one comparison iff both sides are finite.
    bool less(PriorityRef a, PriorityRef b) {
        const int la = level(a);
        const int lb = level(b);
        if (la != lb) return la < lb;  // a sentinel is involved: resolved for free
        if (la == 2) return false;     // top sentinel vs top sentinel
        if (la == 1) {
            // vertex sentinels ordered by the fixed ordering, no oracle call
            return key(a.node) < key(b.node);
        }
        ++count_;
        return key(a.node) < key(b.node);
    }

    /// Convenience form over two nodes with assigned priorities.
    bool less(NodeId u, NodeId v) { return less(ref(u), ref(v)); }

    /// Picks the smaller of the two refs, keeping `a` on ties.
    PriorityRef min(PriorityRef a, PriorityRef b) { return less(b, a) ? b : a; }

    std::uint64_t comparisons() const { return count_; }

private:
    enum class Tag : std::uint8_t { Finite, VertexInf, Unassigned };

    int level(const PriorityRef& r) const {
        switch (r.kind) {
            case PriorityRef::Kind::Finite: return 0;
            case PriorityRef::Kind::VertexInf: return 1;
            case PriorityRef::Kind::TopInf: return 2;
        }
        return 2;
    }

    std::int64_t key(NodeId v) const { return rank_[static_cast<std::size_t>(v)]; }

    void grow(NodeId v) {
        if (static_cast<std::size_t>(v) >= rank_.size()) {
            rank_.resize(static_cast<std::size_t>(v) + 1, -1);
            tag_.resize(static_cast<std::size_t>(v) + 1, Tag::Unassigned);
        }
    }

    std::vector<std::int64_t> rank_;
    std::vector<Tag> tag_;
    std::uint64_t count_ = 0;
};

}  // namespace dtm
