#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

#include "topos4/algebra.hpp"
#include "topos4/common.hpp"
#include "topos4/formula.hpp"
#include "topos4/frames.hpp"
#include "topos4/genspace.hpp"

namespace topos4 {

// ── Comb labelings of the binary tree ──

// One enumeration cycle per world: theta[w] lists R(w), each successor
// exactly once. The default cycle is ascending world order.
struct EnumerationFamily {
    std::vector<std::vector<size_t>> theta;
};

EnumerationFamily default_enumeration(const FiniteFrame& f);

// A total labeling of a truncated binary tree into a frame's worlds.
// Built so that labels never decrease along branches (forth condition).
struct LabeledMap {
    TruncatedTree tree;
    FiniteFrame target;
    std::vector<size_t> labels;  // node -> target world
    EnumerationFamily theta;
};

// The comb scheme: the root takes a root of the frame; a node labeled w
// sitting n steps down a left spine keeps w on its left child and starts
// a fresh spine labeled theta_w(n) on its right child. The image covers
// every world once d >= |W| + 1.
LabeledMap tcomb_labeling(const FiniteFrame& f, const EnumerationFamily& theta,
                          size_t d);
LabeledMap tcomb_labeling(const FiniteFrame& f, size_t d);

struct CombReport {
    bool ok = true;
    std::string failed;  // "forth" or "back"
    size_t node = 0;     // forth: parent; back: node missing a witness
    size_t world = 0;    // forth: offending child; back: unreached successor
    long margin = 0;     // back condition checked for depth <= margin
    std::string detail;
};

// Forth is checked on every tree edge (the tree order is its transitive
// closure). Back is checked for nodes of depth <= d - |W| - 1: the cycle
// structure of theta guarantees witnesses inside the truncation there.
CombReport verify_comb_pmorphism(const LabeledMap& m);

// ── Binary tree onto the b-branching tree ──

struct TreeMapReport {
    bool ok = true;
    bool subset_ok = true;    // labels of descendants stay above the label
    bool literal_ok = true;   // full upset equality inside literal_margin
    bool children_ok = true;  // child coverage inside children_margin
    long literal_margin = 0;  // d minus the target node count
    long children_margin = 0; // d - b - 1
    std::string detail;
};

// Comb labeling of the depth-d binary tree onto the widest b-branching
// tree with fewer than d nodes: left children keep their label, right
// children cycle through the label's target children. Depth-d nodes
// stand in for infinite branches; labels grow monotonically along
// branches, so the supremum of a branch's labels is attained at its
// deepest node and the proxies simply keep their own label. The report
// checks that label images of upsets match upsets of labels within the
// stated margins.
struct CantorMap {
    TruncatedTree source;  // binary, depth d
    TruncatedTree target;  // b-branching, derived depth
    std::vector<size_t> labels;  // source node -> target node
    TreeMapReport report;
};

CantorMap cantor_to_Lalpha(size_t b, size_t d);

// ── Middle-thirds interval construction ──

using Rational = boost::rational<long long>;

std::string rational_string(const Rational& r);  // "p/q"

// An open middle third removed at nesting level k: removal index
// `level` (0-based) and position `pos` (1-based, left to right) within
// its host's construction. The label extends the host label by one bit:
// 1 when pos is odd, 0 when even. host indexes the previous family;
// SIZE_MAX marks members of the outermost family.
struct IntervalMember {
    size_t level = 0;
    unsigned long long pos = 0;
    Rational lo, hi;
    size_t host = SIZE_MAX;
    uint8_t bit = 0;
};

// A closed stage interval of the construction hosting family k.
struct ClosedStage {
    size_t level = 0;
    unsigned long long pos = 0;
    Rational lo, hi;
    size_t host = SIZE_MAX;
};

// Families 0..depth of removed intervals with exact endpoints. Family k
// keeps removal levels <= depth - k inside each host; deeper removals
// stay represented by the surviving closed stages.
struct IntervalConstruction {
    size_t depth = 0;
    std::vector<std::vector<IntervalMember>> families;
    std::vector<std::vector<ClosedStage>> cantor_stages;

    // Label bits of families[k][idx], length k + 1.
    std::vector<uint8_t> label(size_t k, size_t idx) const;
};

IntervalConstruction interval_construction(size_t n);  // n <= 5

struct LabelChain {
    std::vector<std::vector<uint8_t>> chain;  // L_0 (empty label) onward
    bool stopped = false;  // x landed in the Cantor set of its last host
};

// Follows x down the nesting for up to k steps. The chain stops exactly
// when x lies in the Cantor set of its current host interval, decided by
// exact rational orbit detection.
LabelChain label_of_point(const Rational& x, size_t k);

struct IntervalReport {
    bool ok = true;
    bool children_split_ok = true;  // nested labels extend by parity
    bool labels_complete_ok = true; // all 2^(k+1) labels occur while k+1 <= depth
    bool disjoint_ok = true;
    bool length_ok = true;          // lengths <= 1/3^(k+1), maximum attained
    Rational removed_total;         // total length removed by family 0
    std::string detail;
};

IntervalReport verify_interval_lemmas(const IntervalConstruction& c);

// ── Witness selection ──

struct WitnessChoice {
    size_t world = 0;
    FormulaId formula = 0;  // the diamond or box subformula
    size_t witness = 0;
};

struct SelectionResult {
    std::vector<size_t> kept_worlds;  // ascending; restricted index = position
    FiniteFrame restricted_frame;
    SetField restricted_field;  // generated from the subformula values
    std::vector<WitnessChoice> witness_log;  // only set-enlarging choices
    bool field_enlarged = false;  // generation added sets beyond those values
    size_t raw_value_count = 0;   // distinct subformula values
};

// Starting from the refutation world plus the seed, keeps one witness
// per kept world for every true diamond subformula and every false box
// subformula (least world index), iterated to closure. The restricted
// field is generated by the subformula values; the truth lemma (every
// subformula keeps its value on kept worlds) is re-verified and a
// violation raises VerificationError.
SelectionResult cgfp_select(FormulaArena& ar, const GeneralStructure& s,
                            FormulaId phi, const Valuation& val, size_t w,
                            const Subset& seed);

// ── Cluster quotients ──

struct CollapseResult {
    FiniteFrame quotient;
    std::vector<size_t> block_of;
    Valuation pushed;  // letters of phi only
    PMorphismReport projection;
};

// Quotients a single cluster by agreement on all subformulas of phi.
// Inside a cluster the modal subformulas are constant, so blocks are cut
// by letters and Boolean structure alone; the pushed valuation keeps phi
// exactly where it was (re-verified).
CollapseResult cluster_collapse(FormulaArena& ar, const FiniteFrame& cluster,
                                FormulaId phi, const Valuation& val);

struct ClusterQuotient {
    GeneralStructure space;        // order of the quotient topology + field
    std::vector<size_t> point_of;  // tree node -> quotient point
    InteriorMapReport rho;
    bool field_embeds = false;   // A -> image-of-fiber-set is injective and
    std::string field_detail;    // commutes with closure; witness when not
};

// Collapses, for each world of a maximal cluster, the whole label fiber
// to one point; the quotient carries the order of the quotient topology
// (least saturated upsets). rho is checked as an interior map between
// the induced general structures and reported as found: fibers over a
// multi-world cluster can genuinely lose openness at the truncation
// boundary.
ClusterQuotient quotient_by_cluster_fibers(const LabeledMap& m,
                                           const std::vector<size_t>& cluster);

// ── Gluing pipeline ──

struct PipelineResult {
    GeneralStructure glued;
    std::vector<FiniteFrame> h_frames;  // each part glued with its fork
    std::vector<std::vector<size_t>> h_world_maps;  // H_n world -> glued world
};

// For each (frame, maximal cluster of size a): glues the frame with the
// a-fork along the cluster, then glues all results at their fork-maximal
// points. Every intermediate frame lands on an up-closed subframe of the
// result (verified), so refutations in the parts persist; the result is
// connected but has no root once two parts meet.
PipelineResult pipeline_not_s42(
    const std::vector<std::pair<FiniteFrame, std::vector<size_t>>>& parts);

// ── Staged rational labeling ──

struct QPoint {
    Rational x;
    size_t label = 0;
    size_t born = 0;
    Subset flank_labels;  // labels placed on this point's own flanks
};

struct QStageResult {
    std::vector<QPoint> points;  // ascending x, all strictly inside (0,1)
    size_t stages = 0;
    size_t uncovered = 0;  // points whose flanks miss part of R(label)
    bool uncovered_only_last_stage = true;
};

// Stage 0 places 1/2 labeled by a root. Each stage s hands every older
// point two flanks at distance 1/(2*4^s), labeled by the next two
// entries of the cyclic enumeration of R(label); a per-point cursor
// advances so the flanks sweep the whole successor set over time.
QStageResult q_stage(const FiniteFrame& f, size_t k);

// ── Serialization ──

// {"nodes": ["e", "0", "1", ...], "labels": {"e": w, ...}}
nlohmann::json labeled_map_to_json(const LabeledMap& m);

// Families and stages with endpoints as "p/q" strings.
nlohmann::json interval_to_json(const IntervalConstruction& c);

}  // namespace topos4
