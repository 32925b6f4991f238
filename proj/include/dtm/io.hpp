#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dtm/cartesian.hpp"
#include "dtm/core.hpp"
#include "dtm/forest.hpp"

namespace dtm {

/// Forest text fixture: one line per node, `id parent_or_dash child_rank`.
/// child_rank is the node's 0-based position among its parent's children
/// (0 for roots).
inline void write_forest(std::ostream& os, const RootedForest& f) {
    std::vector<std::size_t> rank(f.capacity(), 0);
    for (NodeId v : f.alive_nodes()) {
        std::size_t i = 0;
        for (NodeId c = f.first_child(v); c != kNoNode; c = f.next_sibling(c)) rank[static_cast<std::size_t>(c)] = i++;
    }
    for (NodeId v : f.alive_nodes()) {
        NodeId p = f.parent(v);
        os << v << ' ';
        if (p == kNoNode)
            os << '-';
        else
            os << p;
        os << ' ' << rank[static_cast<std::size_t>(v)] << '\n';
    }
}

inline RootedForest read_forest(std::istream& is) {
    struct Row {
        NodeId id;
        NodeId parent;
        std::size_t rank;
    };
    std::vector<Row> rows;
    NodeId max_id = -1;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string ptok;
        Row r{};
        if (!(ls >> r.id >> ptok >> r.rank)) raise(Errc::BadParams, "bad forest fixture line: " + line);
        r.parent = ptok == "-" ? kNoNode : static_cast<NodeId>(std::stoll(ptok));
        rows.push_back(r);
        max_id = std::max(max_id, r.id);
        max_id = std::max(max_id, r.parent);
    }
    std::vector<NodeId> parents(static_cast<std::size_t>(max_id + 1), kNoNode);
    std::vector<std::vector<std::pair<std::size_t, NodeId>>> ranked(static_cast<std::size_t>(max_id + 1));
    for (const Row& r : rows) {
        parents[static_cast<std::size_t>(r.id)] = r.parent;
        if (r.parent != kNoNode) ranked[static_cast<std::size_t>(r.parent)].emplace_back(r.rank, r.id);
    }
    std::vector<std::vector<NodeId>> orders(parents.size());
    for (std::size_t p = 0; p < ranked.size(); ++p) {
        auto& v = ranked[p];
        std::sort(v.begin(), v.end());
        for (auto& [rank, id] : v) orders[p].push_back(id);
    }
    return RootedForest::build(parents, orders);
}

/// Graph fixture: `n m` header, then one `u v` line per edge.
inline void write_graph(std::ostream& os, const Graph& g) {
    os << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline Graph read_graph(std::istream& is) {
    std::size_t n = 0, m = 0;
    if (!(is >> n >> m)) raise(Errc::BadParams, "bad graph fixture header");
    Graph g(n);
    for (std::size_t i = 0; i < m; ++i) {
        NodeId u, v;
        if (!(is >> u >> v)) raise(Errc::BadParams, "bad graph fixture edge line");
        g.add_edge(u, v);
    }
    return g;
}

/// Elimination tree serialization: one line per node,
/// `id parent_or_dash kind(vertex|edge)`.
inline void write_elimination_tree(std::ostream& os, const EliminationTree& t) {
    for (std::size_t v = 0; v < t.size(); ++v) {
        os << v << ' ';
        if (t.parent[v] == kNoNode)
            os << '-';
        else
            os << t.parent[v];
        os << ' ' << (t.kind[v] == EliminationTree::NodeKind::Edge ? "edge" : "vertex") << '\n';
    }
}

inline EliminationTree read_elimination_tree(std::istream& is) {
    EliminationTree t;
    std::string line;
    std::vector<std::tuple<NodeId, NodeId, std::string>> rows;
    NodeId max_id = -1;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        NodeId id;
        std::string ptok, kind;
        if (!(ls >> id >> ptok >> kind)) raise(Errc::BadParams, "bad elimination tree line: " + line);
        NodeId p = ptok == "-" ? kNoNode : static_cast<NodeId>(std::stoll(ptok));
        rows.emplace_back(id, p, kind);
        max_id = std::max({max_id, id, p});
    }
    t.parent.assign(static_cast<std::size_t>(max_id + 1), kNoNode);
    t.children.assign(static_cast<std::size_t>(max_id + 1), {});
    t.kind.assign(static_cast<std::size_t>(max_id + 1), EliminationTree::NodeKind::Vertex);
    for (auto& [id, p, kind] : rows) {
        t.parent[static_cast<std::size_t>(id)] = p;
        if (p == kNoNode)
            t.root = id;
        else
            t.children[static_cast<std::size_t>(p)].push_back(id);
        if (kind == "edge") t.kind[static_cast<std::size_t>(id)] = EliminationTree::NodeKind::Edge;
    }
    return t;
}

}  // namespace dtm
