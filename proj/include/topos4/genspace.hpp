#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "topos4/algebra.hpp"
#include "topos4/common.hpp"
#include "topos4/frames.hpp"

namespace topos4 {

// A finite topology given by its full list of opens. Closed under union
// and intersection with the empty set and the carrier present (verified
// at construction). Finite topologies have least neighborhoods, so the
// closure operator is determined by singleton closures.
struct FiniteTopology {
    size_t n = 0;
    std::vector<Subset> opens;  // sorted canonically

    bool is_open(const Subset& a) const;
    Subset interior(const Subset& a) const;  // largest open inside a
    Subset closure(const Subset& a) const;   // smallest closed superset
};

bool operator==(const FiniteTopology& a, const FiniteTopology& b);

FiniteTopology topology_from_opens(size_t n, std::vector<Subset> opens);
FiniteTopology discrete_topology(size_t n);   // carrier <= 16
FiniteTopology indiscrete_topology(size_t n);

// x below y iff x lies in the closure of {y}. Always a preorder.
FiniteFrame specialization_order(const FiniteTopology& t);

// Opens are the R-upsets; R(w) is the least neighborhood of w. Needs a
// preorder; carrier <= 16 (the opens are enumerated explicitly).
FiniteTopology alexandroff_topology(const FiniteFrame& f);

// ── General structures ──

enum class BaseKind { Frame, Space };

// A frame or topology together with a field of sets over the same
// carrier, closed under the base's closure operator.
struct GeneralStructure {
    BaseKind kind = BaseKind::Frame;
    FiniteFrame frame;     // meaningful when kind == Frame
    FiniteTopology space;  // meaningful when kind == Space
    SetField field;

    size_t carrier() const {
        return kind == BaseKind::Frame ? frame.n : space.n;
    }
};

// Validate members (Boolean operations, closure of the base) and attach
// the base-derived closure operator.
GeneralStructure make_general_frame(const FiniteFrame& f,
                                    const std::vector<Subset>& members);
GeneralStructure make_general_space(const FiniteTopology& t,
                                    const std::vector<Subset>& members);
GeneralStructure general_frame_powerset(const FiniteFrame& f);
GeneralStructure general_space_powerset(const FiniteTopology& t);

struct DescriptiveReport {
    bool differentiated = true;
    size_t diff_w = 0, diff_v = 0;  // a pair the field cannot separate
    bool compact = true;
    std::string compact_note;
    bool tight = true;
    std::string tight_detail;       // witness when tight fails
    bool all() const { return differentiated && compact && tight; }
};

// Differentiated: the field separates points. Compact: the finite
// intersection property is run on the closed members and reported as
// vacuous (a finite family is a finite subfamily of itself). Tight: for
// frames, w not related to v is witnessed by a member containing v whose
// closure misses w; for spaces, the open field members form a basis.
DescriptiveReport check_descriptive(const GeneralStructure& s);

// The Stone-style conversions, restricted to finite carriers. Both
// require compact and tight input (checked; failures report a witness)
// and both re-verify that the field closure agrees on the other side:
// c(A) = R^{-1}[A] for every member A.
GeneralStructure to_frame(const GeneralStructure& s);  // space -> frame
GeneralStructure to_space(const GeneralStructure& s);  // frame -> space

// ── Interior maps ──

struct InteriorMapReport {
    bool ok = true;
    bool onto = false;
    std::string failed;  // "range", "continuity", "openness", "field-pullback"
    std::string detail;
};

// Continuity: preimages of opens are open. Openness: images of opens are
// open. On explicit topologies both are checked open by open; frame-based
// structures use the order formulation (finite spaces are Alexandroff, so
// the two agree): continuity is the forth condition on specialization
// orders, openness is the back condition.
InteriorMapReport check_interior_map(const std::vector<size_t>& f,
                                     const FiniteTopology& x,
                                     const FiniteTopology& y);

// Adds the field pullback check: members of y's field pull back to
// members of x's field.
InteriorMapReport check_interior_map(const std::vector<size_t>& f,
                                     const GeneralStructure& x,
                                     const GeneralStructure& y);

// ── Sums and gluing ──

struct SumResult {
    GeneralStructure structure;
    std::vector<std::vector<size_t>> injections;
};

// Disjoint sum: a set is open (a member) iff its trace on every part is.
// Parts must share a kind; the empty sum is the empty space.
SumResult sum(const std::vector<GeneralStructure>& parts);

// Parts glued along a shared structure: embeddings[i] maps each shared
// point to its copy in part i. Images must be open, carry the subspace
// structure isomorphically, and pull the part field back onto the shared
// field. Points f_i(y) and f_j(y) are identified across parts.
struct GluingSpec {
    std::vector<GeneralStructure> parts;
    GeneralStructure shared;
    std::vector<std::vector<size_t>> embeddings;
};

struct GluingResult {
    GeneralStructure glued;
    std::vector<std::vector<size_t>> projections;  // part world -> glued world
    InteriorMapReport rho;  // the quotient map from the sum, always interior
};

// Quotient carrier representatives are the least (part, world) pair, in
// that order. The glued field is {A : every projection preimage is a
// member}, enumerated explicitly (glued carrier <= 16).
GluingResult glue(const GluingSpec& spec);

// ── Serialization ──

// {"carrier": n, "opens": [mask...], "field": [mask...]}; carrier <= 16.
nlohmann::json space_to_json(const GeneralStructure& s);
GeneralStructure space_from_json(const nlohmann::json& j);

}  // namespace topos4
