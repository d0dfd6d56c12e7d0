#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "topos4/common.hpp"
#include "topos4/formula.hpp"
#include "topos4/frames.hpp"

namespace topos4 {

// A closure operator on subsets of {0..n-1}. Stored as an explicit table
// over the powerset for small carriers, or as the singleton-closure rows
// c({x}) when built from a relation or topology; the row form is additive
// by construction. c(A) = union of c({x}) for x in A.
class ClosureOp {
public:
    ClosureOp() = default;

    // table[mask] = closure of the subset encoded by mask. Carrier <= 16.
    static ClosureOp from_table(size_t n, const std::vector<uint64_t>& table);

    // rows[x] = c({x}).
    static ClosureOp from_rows(std::vector<Subset> rows);

    // c(A) = R^{-1}[A]. Satisfies the closure axioms iff R is a preorder.
    static ClosureOp from_frame(const FiniteFrame& f);

    size_t carrier() const { return n_; }
    bool tabulated() const { return tabulated_; }

    Subset close(const Subset& a) const;
    Subset interior(const Subset& a) const;  // complement, close, complement

private:
    size_t n_ = 0;
    bool tabulated_ = false;
    std::vector<Subset> data_;  // table (2^n entries) or rows (n entries)
};

struct ClosureAxiomReport {
    bool ok = true;
    std::string axiom;  // "normality", "extensivity", "additivity", "idempotence"
    Subset a, b;        // witness sets (b used by additivity)
    std::string detail() const;
};

// Checks c(empty) = empty, A subseteq c(A), c(A u B) = c(A) u c(B), and
// cc(A) = c(A). Table operators are checked over the whole powerset; row
// operators are normal and additive by construction, so only the
// singleton instances of extensivity and idempotence can fail.
ClosureAxiomReport check_closure_axioms(const ClosureOp& op);

// A field of sets with a closure operator: contains the empty set and the
// carrier, closed under complement, intersection, and closure.
struct SetField {
    size_t n = 0;
    std::vector<Subset> members;  // sorted canonically, deduplicated
    ClosureOp closure;

    bool contains(const Subset& a) const;
    size_t index_of(const Subset& a) const;  // SIZE_MAX if absent
};

// Extensional: same carrier, same members, same closure on the members.
bool operator==(const SetField& a, const SetField& b);

// Smallest field containing the generators. The closure operator must
// satisfy the axioms (checked; violations throw with a witness).
SetField field_generate(size_t n, const ClosureOp& closure,
                        const std::vector<Subset>& generators,
                        size_t member_cap = size_t{1} << 16);

// All 2^n subsets. Carrier <= 16.
SetField powerset_field(size_t n, const ClosureOp& closure);
SetField powerset_field(const FiniteFrame& f);

// ── Evaluation ──

using Valuation = std::map<uint32_t, Subset>;  // letter index -> member

// Diamond is closure, box is interior, Booleans are set operations.
// Every assigned set must belong to the field; the result always does.
Subset evaluate(FormulaArena& ar, FormulaId f, const SetField& field,
                const Valuation& val);

struct ValidityReport {
    bool valid = true;
    std::vector<std::pair<std::string, Subset>> countervaluation;
    size_t world = 0;  // least world where the refuted formula fails
};

// Exhaustive sweep over member tuples for f's letters, in member order
// with the last letter varying fastest; stops at the first refutation.
// Letter count is capped (TOPOS4_CAP, default 4).
ValidityReport validates(FormulaArena& ar, const SetField& field, FormulaId f,
                         int letter_cap = -1);

// Connected: no clopen member besides the empty set and the carrier.
bool is_connected(const SetField& field);

// Well-connected: c(A) and c(B) disjoint forces A or B empty, over all
// member pairs. Implies connected.
bool is_well_connected(const SetField& field);

// ── Heyting algebra of open elements ──

struct HeytingAlgebra {
    size_t n = 0;
    std::vector<Subset> opens;  // sorted canonically
    ClosureOp closure;          // of the source field

    Subset impl(const Subset& a, const Subset& b) const;  // interior(-a u b)
    size_t index_of(const Subset& a) const;
};

// The open members of the field, with a -> b = interior(-a u b). Checks
// that the opens are closed under the lattice operations and implication
// and that residuation (a n x <= b iff x <= a -> b) holds on all triples;
// a failure signals that the input was not a closure algebra.
HeytingAlgebra open_elements(const SetField& field);

// Intuitionistic validity over open-element tuples. Rejects modal input.
ValidityReport heyting_validates(FormulaArena& ar, const HeytingAlgebra& h,
                                 FormulaId f, int letter_cap = -1);

// ── Serialization ──

// {"carrier": n, "members": [mask...], "closure": [[mask, cmask]...]}
// with the closure tabulated over the whole powerset. Carrier <= 16.
nlohmann::json field_to_json(const SetField& field);
SetField field_from_json(const nlohmann::json& j);

}  // namespace topos4
