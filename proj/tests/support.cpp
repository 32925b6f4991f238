#include "support.hpp"

#include <map>

namespace test_support {
namespace {

// Catalog of all rooted tree shapes with up to N nodes, built bottom-up.
// Each shape is stored as a parent vector rooted at node 0.
struct Catalog {
    // shapes[k] = list of trees on k nodes
    std::vector<std::vector<std::vector<NodeId>>> shapes;

    explicit Catalog(std::size_t max_n) {
        shapes.resize(max_n + 1);
        if (max_n >= 1) shapes[1] = {{kNoNode}};
        for (std::size_t n = 2; n <= max_n; ++n) build(n);
    }

    void build(std::size_t n) {
        std::map<std::string, std::vector<NodeId>> dedup;
        // choose a multiset of child subtrees with sizes summing to n-1;
        // recursion over (smallest allowed catalog index) avoids permutations
        std::vector<std::pair<std::size_t, std::size_t>> chosen;  // (size, index)
        enumerate(n - 1, 1, 0, chosen, dedup);
        shapes[n].reserve(dedup.size());
        for (auto& [enc, tree] : dedup) shapes[n].push_back(std::move(tree));
    }

    void enumerate(std::size_t remaining, std::size_t min_size, std::size_t min_index,
                   std::vector<std::pair<std::size_t, std::size_t>>& chosen,
                   std::map<std::string, std::vector<NodeId>>& dedup) {
        if (remaining == 0) {
            std::vector<NodeId> tree = assemble(chosen);
            dedup.emplace(canonical_encoding(tree, 0), tree);
            return;
        }
        for (std::size_t s = min_size; s <= remaining; ++s) {
            const std::size_t start = (s == min_size) ? min_index : 0;
            for (std::size_t i = start; i < shapes[s].size(); ++i) {
                chosen.emplace_back(s, i);
                enumerate(remaining - s, s, i, chosen, dedup);
                chosen.pop_back();
            }
        }
    }

    std::vector<NodeId> assemble(const std::vector<std::pair<std::size_t, std::size_t>>& chosen) const {
        std::vector<NodeId> tree{kNoNode};  // root = 0
        for (auto [s, i] : chosen) {
            const std::vector<NodeId>& sub = shapes[s][i];
            const NodeId base = static_cast<NodeId>(tree.size());
            for (std::size_t v = 0; v < sub.size(); ++v)
                tree.push_back(sub[v] == kNoNode ? NodeId(0) : base + sub[v]);
        }
        return tree;
    }
};

}  // namespace

std::vector<std::vector<NodeId>> all_rooted_trees(std::size_t n) {
    static Catalog catalog(10);
    if (n > 10) dtm::raise(dtm::Errc::TooLarge, "tree shape catalog covers n <= 10");
    return catalog.shapes[n];
}

}  // namespace test_support
