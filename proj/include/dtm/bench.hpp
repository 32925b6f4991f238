#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dtm/core.hpp"
#include "dtm/dtm.hpp"
#include "dtm/entropy.hpp"
#include "dtm/forest.hpp"
#include "dtm/oracle.hpp"
#include "dtm/path_engine.hpp"

namespace dtm::bench {

using Rng = std::mt19937_64;

// ---------- fixture generators ----------

inline std::vector<NodeId> path_parents(std::size_t n) {
    std::vector<NodeId> p(n, kNoNode);
    for (std::size_t v = 1; v < n; ++v) p[v] = static_cast<NodeId>(v - 1);
    return p;
}

inline std::vector<NodeId> star_parents(std::size_t n) {
    std::vector<NodeId> p(n, kNoNode);
    for (std::size_t v = 1; v < n; ++v) p[v] = 0;
    return p;
}

/// Spine of ceil(n/2) nodes, one pendant leaf under each spine node.
inline std::vector<NodeId> caterpillar_parents(std::size_t n) {
    std::vector<NodeId> p(n, kNoNode);
    const std::size_t spine = (n + 1) / 2;
    for (std::size_t v = 1; v < spine; ++v) p[v] = static_cast<NodeId>(v - 1);
    for (std::size_t v = spine; v < n; ++v) p[v] = static_cast<NodeId>(v - spine);
    return p;
}

inline std::vector<NodeId> complete_binary_parents(std::size_t n) {
    std::vector<NodeId> p(n, kNoNode);
    for (std::size_t v = 1; v < n; ++v) p[v] = static_cast<NodeId>((v - 1) / 2);
    return p;
}

/// Uniform random labeled rooted tree: node v attaches to a uniform earlier
/// node (random recursive tree; deterministic per seed).
inline std::vector<NodeId> random_tree_parents(std::size_t n, Rng& rng) {
    std::vector<NodeId> p(n, kNoNode);
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> d(0, v - 1);
        p[v] = static_cast<NodeId>(d(rng));
    }
    return p;
}

/// Root with k single-node children plus one chain of n-k-1 nodes: linear
/// lower bound but a log factor for the leaf-count-based structure.
inline std::vector<NodeId> bad_tree_parents(std::size_t n, std::size_t k) {
    if (n < k + 2) raise(Errc::BadParams, "bad_tree needs n >= k+2");
    std::vector<NodeId> p(n, kNoNode);
    for (std::size_t v = 1; v <= k; ++v) p[v] = 0;
    p[k + 1] = 0;
    for (std::size_t v = k + 2; v < n; ++v) p[v] = static_cast<NodeId>(v - 1);
    return p;
}

inline std::size_t default_bad_tree_k(std::size_t n) {
    const double k = std::ceil(static_cast<double>(n) / std::log2(static_cast<double>(n)));
    return static_cast<std::size_t>(k);
}

/// Connected random graph: a random spanning tree plus extra random edges.
inline Graph random_connected_graph(std::size_t n, std::size_t extra_edges, Rng& rng) {
    Graph g(n);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> d(0, v - 1);
        g.add_edge(perm[v], perm[d(rng)]);
    }
    std::size_t attempts = 0;
    std::size_t added = 0;
    const std::size_t max_extra = n < 2 ? 0 : n * (n - 1) / 2 - (n - 1);
    extra_edges = std::min(extra_edges, max_extra);
    while (added < extra_edges && attempts < 50 * (extra_edges + 1)) {
        ++attempts;
        std::uniform_int_distribution<std::size_t> d(0, n - 1);
        NodeId u = static_cast<NodeId>(d(rng));
        NodeId v = static_cast<NodeId>(d(rng));
        if (u == v) continue;
        bool dup = false;
        for (auto [w, e] : g.neighbors(u))
            if (w == v) {
                dup = true;
                break;
            }
        if (dup) continue;
        g.add_edge(u, v);
        ++added;
    }
    return g;
}

struct Fixture {
    std::string family;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<NodeId> parents;  // tree families
    Graph graph;                  // random_graph family
    bool is_graph = false;
};

inline Fixture generate(const std::string& family, std::size_t n, std::uint64_t seed, std::size_t param = 0) {
    if (n < 1) raise(Errc::BadParams, "n must be positive");
    Rng rng(seed);
    Fixture fx;
    fx.family = family;
    fx.n = n;
    fx.seed = seed;
    if (family == "path")
        fx.parents = path_parents(n);
    else if (family == "star")
        fx.parents = star_parents(n);
    else if (family == "caterpillar")
        fx.parents = caterpillar_parents(n);
    else if (family == "complete_binary")
        fx.parents = complete_binary_parents(n);
    else if (family == "random_tree")
        fx.parents = random_tree_parents(n, rng);
    else if (family == "bad_tree")
        fx.parents = bad_tree_parents(n, param ? param : default_bad_tree_k(n));
    else if (family == "random_graph") {
        fx.graph = random_connected_graph(n, param ? param : n / 2, rng);
        fx.is_graph = true;
    } else
        raise(Errc::BadParams, "unknown family: " + family);
    return fx;
}

// ---------- priorities and workloads ----------

/// Random permutation priorities: node v gets rank perm[v].
inline std::vector<std::int64_t> random_ranks(std::size_t n, Rng& rng) {
    std::vector<std::int64_t> r(n);
    std::iota(r.begin(), r.end(), 0);
    std::shuffle(r.begin(), r.end(), rng);
    return r;
}

/// Uniform linear extension of the tree order (children before parents):
/// recursively interleave the child sequences uniformly and append the root.
/// Returns ranks: rank[v] = position of v in the sampled order.
inline std::vector<std::int64_t> monotone_ranks(const RootedForest& t, Rng& rng) {
    // iterative post-order merge
    std::vector<std::vector<NodeId>> seq(t.capacity());
    for (NodeId r : t.roots()) {
        std::vector<std::pair<NodeId, bool>> stack{{r, false}};
        while (!stack.empty()) {
            auto [v, expanded] = stack.back();
            stack.pop_back();
            if (!expanded) {
                stack.push_back({v, true});
                for (NodeId c : t.children(v)) stack.push_back({c, false});
                continue;
            }
            std::vector<std::vector<NodeId>> parts;
            for (NodeId c : t.children(v)) parts.push_back(std::move(seq[static_cast<std::size_t>(c)]));
            std::vector<NodeId>& out = seq[static_cast<std::size_t>(v)];
            if (parts.size() == 1) {
                out = std::move(parts[0]);
            } else if (!parts.empty()) {
                std::size_t total = 0;
                for (auto& p : parts) total += p.size();
                out.reserve(total + 1);
                std::vector<std::size_t> idx(parts.size(), 0);
                std::size_t remaining = total;
                while (remaining > 0) {
                    std::uniform_int_distribution<std::size_t> d(1, remaining);
                    std::size_t pick = d(rng);
                    for (std::size_t i = 0; i < parts.size(); ++i) {
                        const std::size_t left = parts[i].size() - idx[i];
                        if (pick <= left) {
                            out.push_back(parts[i][idx[i]++]);
                            break;
                        }
                        pick -= left;
                    }
                    --remaining;
                }
            }
            out.push_back(v);
        }
    }
    // concatenate root sequences (forest case: per-component monotone)
    std::vector<std::int64_t> ranks(t.capacity(), -1);
    std::int64_t next = 0;
    for (NodeId r : t.roots())
        for (NodeId v : seq[static_cast<std::size_t>(r)]) ranks[static_cast<std::size_t>(v)] = next++;
    return ranks;
}

enum class WorkloadKind { TreeSort, TopK, RandomCuts, Mixed };

struct Workload {
    WorkloadKind kind = WorkloadKind::TreeSort;
    std::size_t m = 0;       // operation count
    std::size_t k = 0;       // TopK only
    std::uint64_t seed = 0;  // RandomCuts / Mixed only
};

struct Op {
    enum class Type { TreeMin, Cut } type;
    NodeId arg;  // TreeMin: query vertex; Cut: the node whose parent edge goes
};

/// The answer stream of a run: one entry per tree-min (the reported node).
struct RunAnswers {
    std::vector<NodeId> mins;
    std::vector<NodeId> cut_order;
};

/// Scan-based reference DTM: the independent oracle for verification.
class ScanDtm {
public:
    ScanDtm(const RootedForest& t, const std::vector<std::int64_t>& ranks)
        : parent_(t.capacity(), kNoNode), ranks_(ranks) {
        for (NodeId v : t.alive_nodes()) parent_[static_cast<std::size_t>(v)] = t.parent(v);
        n_ = t.capacity();
    }

    NodeId tree_min(NodeId v) const {
        // component = all nodes sharing v's root under parent walks
        NodeId rv = walk_root(v);
        NodeId best = kNoNode;
        for (std::size_t u = 0; u < n_; ++u) {
            if (walk_root(static_cast<NodeId>(u)) != rv) continue;
            if (best == kNoNode || ranks_[u] < ranks_[static_cast<std::size_t>(best)]) best = static_cast<NodeId>(u);
        }
        return best;
    }

    void cut(NodeId v) { parent_[static_cast<std::size_t>(v)] = kNoNode; }

private:
    NodeId walk_root(NodeId v) const {
        while (parent_[static_cast<std::size_t>(v)] != kNoNode) v = parent_[static_cast<std::size_t>(v)];
        return v;
    }

    std::vector<NodeId> parent_;
    std::vector<std::int64_t> ranks_;
    std::size_t n_;
};

/// Materializes a workload into an explicit op sequence. Tree-sort and top-k
/// need the structure's own answers, so they are driven online; random cuts
/// and mixed sequences are precomputed here against the forest shape.
inline std::vector<Op> random_ops(const RootedForest& t, std::size_t m, bool mixed, Rng& rng) {
    std::vector<Op> ops;
    std::vector<NodeId> cuttable;
    for (NodeId v : t.alive_nodes())
        if (t.parent(v) != kNoNode) cuttable.push_back(v);
    std::vector<NodeId> alive = t.alive_nodes();
    for (std::size_t i = 0; i < m; ++i) {
        const bool do_cut = !cuttable.empty() && (!mixed || (rng() & 1));
        if (do_cut) {
            std::uniform_int_distribution<std::size_t> d(0, cuttable.size() - 1);
            std::size_t j = d(rng);
            NodeId v = cuttable[j];
            cuttable[j] = cuttable.back();
            cuttable.pop_back();
            ops.push_back({Op::Type::Cut, v});
        } else {
            std::uniform_int_distribution<std::size_t> d(0, alive.size() - 1);
            ops.push_back({Op::Type::TreeMin, alive[d(rng)]});
        }
    }
    return ops;
}

enum class StructureKind { Uo, Naive, Path, Brute };

inline StructureKind parse_structure(const std::string& s) {
    if (s == "uo") return StructureKind::Uo;
    if (s == "naive") return StructureKind::Naive;
    if (s == "path") return StructureKind::Path;
    if (s == "brute") return StructureKind::Brute;
    raise(Errc::BadParams, "unknown structure: " + s);
}

struct RunRecord {
    std::string family;
    std::size_t n = 0;
    std::size_t m_requested = 0;
    std::size_t ops_executed = 0;
    std::string structure;
    std::string workload;
    std::uint64_t seed = 0;
    std::uint64_t priority_seed = 0;
    std::uint64_t comparisons = 0;
    double wall_ms = 0;
    double entropy_h = 0;
    double entropy_hm = 0;
    double entropy_hs = 0;  // over the actually-cut node set, post hoc
    double lower_bound = 0;
    double ratio = 0;  // comparisons / (m + n + H_m)
    bool verified = false;
    DtmOpStats canonical;  // uo structure only
};

/// One polymorphic driver over the four structure kinds; keeps the answer
/// stream for verification.
class AnyDtm {
public:
    AnyDtm(StructureKind kind, const RootedForest& t, const std::vector<std::int64_t>& ranks)
        : kind_(kind), oracle_(ranks) {
        switch (kind_) {
            case StructureKind::Uo: {
                RootedForest copy = t;
                uo_ = std::make_unique<UoDtm>(std::move(copy), oracle_);
                break;
            }
            case StructureKind::Naive:
                naive_ = std::make_unique<NaiveDtm>(t, oracle_);
                break;
            case StructureKind::Path:
                path_ = std::make_unique<PathDtm>(t, oracle_);
                break;
            case StructureKind::Brute:
                brute_ = std::make_unique<ScanDtm>(t, ranks);
                break;
        }
    }

    NodeId tree_min(NodeId v) {
        switch (kind_) {
            case StructureKind::Uo: return uo_->tree_min(v);
            case StructureKind::Naive: return naive_->tree_min(v);
            case StructureKind::Path: return path_->tree_min(v);
            case StructureKind::Brute: return brute_->tree_min(v);
        }
        return kNoNode;
    }

    void cut(NodeId v) {
        switch (kind_) {
            case StructureKind::Uo: uo_->cut(v); break;
            case StructureKind::Naive: naive_->cut(v); break;
            case StructureKind::Path: path_->cut(v); break;
            case StructureKind::Brute: brute_->cut(v); break;
        }
    }

    std::uint64_t comparisons() const { return oracle_.comparisons(); }
    const UoDtm* uo() const { return uo_.get(); }

private:
    StructureKind kind_;
    PriorityOracle oracle_;
    std::unique_ptr<UoDtm> uo_;
    std::unique_ptr<NaiveDtm> naive_;
    std::unique_ptr<PathDtm> path_;
    std::unique_ptr<ScanDtm> brute_;
};

struct RunOutput {
    RunRecord record;
    RunAnswers answers;
};

/// Executes a workload on a tree fixture with the chosen structure.
/// With verify=true the answer stream is replayed against the scan oracle
/// (OracleMismatch on any difference).
inline RunOutput run_tree_workload(const Fixture& fx, StructureKind kind, const Workload& wl,
                                   std::uint64_t priority_seed, bool verify) {
    if (fx.is_graph) raise(Errc::BadParams, "tree workload on a graph fixture");
    RootedForest t = RootedForest::build(fx.parents);
    Rng prng(priority_seed);
    std::vector<std::int64_t> ranks;
    std::string wl_name;
    std::size_t target_ops = wl.m;
    switch (wl.kind) {
        case WorkloadKind::TreeSort: {
            ranks = monotone_ranks(t, prng);
            wl_name = "tree_sort";
            break;
        }
        case WorkloadKind::TopK: {
            ranks = monotone_ranks(t, prng);
            wl_name = "top_k:" + std::to_string(wl.k);
            target_ops = 2 * wl.k;
            break;
        }
        case WorkloadKind::RandomCuts: {
            ranks = random_ranks(t.capacity(), prng);
            wl_name = "random_cuts";
            break;
        }
        case WorkloadKind::Mixed: {
            ranks = random_ranks(t.capacity(), prng);
            wl_name = "mixed";
            break;
        }
    }

    RunOutput out;
    out.record.family = fx.family;
    out.record.n = fx.n;
    out.record.m_requested = wl.m;
    out.record.structure = kind == StructureKind::Uo    ? "uo"
                           : kind == StructureKind::Naive ? "naive"
                           : kind == StructureKind::Path  ? "path"
                                                          : "brute";
    out.record.workload = wl_name;
    out.record.seed = fx.seed;
    out.record.priority_seed = priority_seed;

    const auto t0 = std::chrono::steady_clock::now();
    AnyDtm dtm(kind, t, ranks);

    // drive
    NodeId root = t.roots().empty() ? kNoNode : t.roots()[0];
    std::size_t executed = 0;
    if (wl.kind == WorkloadKind::TreeSort || wl.kind == WorkloadKind::TopK) {
        std::size_t rounds = (wl.kind == WorkloadKind::TopK) ? wl.k : (target_ops > 0 ? target_ops / 2 : fx.n - 1);
        rounds = std::min(rounds, fx.n > 0 ? fx.n - 1 : 0);
        for (std::size_t i = 0; i < rounds; ++i) {
            NodeId v = dtm.tree_min(root);
            out.answers.mins.push_back(v);
            dtm.cut(v);
            out.answers.cut_order.push_back(v);
            executed += 2;
        }
    } else {
        Rng wrng(wl.seed);
        std::vector<Op> ops = random_ops(t, wl.m, wl.kind == WorkloadKind::Mixed, wrng);
        for (const Op& op : ops) {
            if (op.type == Op::Type::TreeMin) {
                out.answers.mins.push_back(dtm.tree_min(op.arg));
            } else {
                dtm.cut(op.arg);
                out.answers.cut_order.push_back(op.arg);
            }
            ++executed;
        }
    }
    const auto t1 = std::chrono::steady_clock::now();

    out.record.ops_executed = executed;
    out.record.comparisons = dtm.comparisons();
    out.record.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (dtm.uo()) out.record.canonical = dtm.uo()->stats();

    // entropy report (post hoc)
    out.record.entropy_h = tree_entropy(t);
    const std::size_t m_eff = std::max<std::size_t>(executed, 1);
    out.record.entropy_hm = entropy_k(t, m_eff).first;
    out.record.entropy_hs =
        out.answers.cut_order.empty() ? 0.0 : entropy_subset(t, out.answers.cut_order);
    out.record.lower_bound = lower_bound_bits(t, m_eff);
    const double denom = static_cast<double>(m_eff) + static_cast<double>(fx.n) + out.record.entropy_hm;
    out.record.ratio = static_cast<double>(out.record.comparisons) / denom;

    if (verify) {
        if (fx.n > 300) raise(Errc::BadParams, "verification is limited to n <= 300");
        ScanDtm ref(t, ranks);
        std::size_t qi = 0;
        std::size_t ci = 0;
        // replay with the same interleaving
        if (wl.kind == WorkloadKind::TreeSort || wl.kind == WorkloadKind::TopK) {
            for (std::size_t i = 0; i < out.answers.mins.size(); ++i) {
                NodeId expect = ref.tree_min(root);
                if (expect != out.answers.mins[i]) raise(Errc::OracleMismatch, "tree_min diverged");
                ref.cut(out.answers.cut_order[i]);
            }
        } else {
            Rng wrng(wl.seed);
            std::vector<Op> ops = random_ops(t, wl.m, wl.kind == WorkloadKind::Mixed, wrng);
            for (const Op& op : ops) {
                if (op.type == Op::Type::TreeMin) {
                    NodeId expect = ref.tree_min(op.arg);
                    if (expect != out.answers.mins[qi++]) raise(Errc::OracleMismatch, "tree_min diverged");
                } else {
                    ref.cut(op.arg);
                    ++ci;
                }
            }
        }
        out.record.verified = true;
    }
    return out;
}

}  // namespace dtm::bench
