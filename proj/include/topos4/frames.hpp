#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topos4/common.hpp"

namespace topos4 {

// A finite frame (W, R) with W = {0, ..., n-1}. The relation is stored
// row-wise: rel[w] is the successor set R(w). Worlds may carry optional
// display labels (labels is empty or has size n).
struct FiniteFrame {
    size_t n = 0;
    std::vector<Subset> rel;
    std::vector<std::string> labels;

    bool related(size_t w, size_t v) const { return rel.at(w).test(v); }
    std::string world_name(size_t w) const {
        return labels.empty() ? std::to_string(w) : labels.at(w);
    }
};

bool operator==(const FiniteFrame& a, const FiniteFrame& b);

FiniteFrame make_frame(size_t n,
                       const std::vector<std::pair<size_t, size_t>>& pairs,
                       std::vector<std::string> labels = {});

std::vector<std::pair<size_t, size_t>> relation_pairs(const FiniteFrame& f);

// ── Preorder structure ──

struct S4Report {
    bool ok = true;
    std::string failed;  // "reflexivity" or "transitivity"
    size_t w = 0, v = 0; // the missing pair (w,w) or (w,v)
    size_t via = 0;      // transitivity only: w R via R v held
    std::string detail() const;
};

// Reports the first missing pair, scanning worlds in ascending order.
S4Report check_s4(const FiniteFrame& f);

// Throws PreconditionError naming `who` if f is not reflexive-transitive.
void require_s4(const FiniteFrame& f, const std::string& who);

Subset image(const FiniteFrame& f, const Subset& a);     // R[A]
Subset preimage(const FiniteFrame& f, const Subset& a);  // R^{-1}[A]
bool is_upset(const FiniteFrame& f, const Subset& a);

// Worlds that see every world. Nonempty exactly for rooted frames.
std::vector<size_t> roots(const FiniteFrame& f);

// Equivalence classes of mutual reachability, sorted by least element.
// Requires a preorder.
std::vector<std::vector<size_t>> clusters(const FiniteFrame& f);

// Clusters with no strict successor (successor set equals the cluster).
std::vector<std::vector<size_t>> maximal_clusters(const FiniteFrame& f);

struct SubframeResult {
    FiniteFrame frame;
    std::vector<size_t> worlds;  // subframe world i is original worlds[i]
};

// The subframe generated by w: carrier R(w), induced relation.
SubframeResult generated_subframe(const FiniteFrame& f, size_t w);

struct UnionResult {
    FiniteFrame frame;
    std::vector<std::vector<size_t>> injections;  // per part, old -> new
};

UnionResult disjoint_union(const std::vector<FiniteFrame>& parts);

// ── Maps and quotients ──

struct PMorphismReport {
    bool ok = true;
    bool onto = false;
    std::string failed;  // "range", "forth", "back"
    size_t w = 0, v = 0; // witness: forth: w R w' with v = w'; back: target v
    std::string detail() const;
};

// f maps src worlds to dst worlds. Forth: w R w' implies f(w) S f(w').
// Back: f(w) S v implies some w' with w R w' and f(w') = v.
PMorphismReport check_p_morphism(const FiniteFrame& src,
                                 const FiniteFrame& dst,
                                 const std::vector<size_t>& f);

struct QuotientResult {
    FiniteFrame frame;
    std::vector<size_t> block_of;  // world -> block index
};

// Blocks must partition the carrier. Block i relates to block j iff some
// member of i relates to some member of j.
QuotientResult quotient(const FiniteFrame& f,
                        const std::vector<std::vector<size_t>>& blocks);

// ── Stock frames ──

// n mutually related worlds, labeled w0, w1, ...
FiniteFrame make_cluster(size_t n);

// 0 < 1 < ... < n-1 with labels c0, c1, ...
FiniteFrame make_chain(size_t n);

// Root r below both a terminal point m and an alpha-world cluster.
// Carrier: r = 0, m = 1, cluster worlds 2 ... alpha+1.
FiniteFrame make_fork(size_t alpha);

// The b-branching tree of words, truncated at depth d, ordered by the
// prefix relation. Nodes are indexed breadth-first, so node 0 is the
// empty word and digits order siblings. Depth-d nodes are flagged as
// stand-ins for the infinite branches cut off by the truncation.
struct TruncatedTree {
    FiniteFrame frame;
    size_t branching = 0;
    size_t depth = 0;
    std::vector<std::vector<uint8_t>> seqs;  // node -> word, BFS order

    size_t depth_of(size_t node) const { return seqs.at(node).size(); }
    bool is_limit(size_t node) const { return depth_of(node) == depth; }
    size_t node_of(const std::vector<uint8_t>& seq) const;
    size_t child(size_t node, uint8_t digit) const;
    std::vector<size_t> children(size_t node) const;
};

TruncatedTree truncated_tree(size_t b, size_t d);

// For the binary tree: the branching words a_k = 0^k 1, k < d. Their
// upsets are pairwise disjoint.
std::vector<size_t> comb_roots(const TruncatedTree& t);

// ── Catalog ──

// All preorders on n labeled worlds, in a fixed deterministic order.
// Counts for n = 1..4: 1, 4, 29, 355.
std::vector<FiniteFrame> enumerate_preorders(size_t n);

bool is_rooted(const FiniteFrame& f);
bool is_poset(const FiniteFrame& f);   // preorder with singleton clusters
// Connected as an undirected graph (R union R-inverse reaches everything).
bool is_connected_frame(const FiniteFrame& f);

// ── Serialization ──

nlohmann::json frame_to_json(const FiniteFrame& f);
FiniteFrame frame_from_json(const nlohmann::json& j);

// Graphviz rendering: worlds grouped by cluster (multi-world clusters
// drawn as boxes), edges showing the cover relation between clusters.
std::string frame_to_dot(const FiniteFrame& f);

}  // namespace topos4
