#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "topos4/common.hpp"

namespace topos4 {

// Modal formulas over letters [a-z][a-z0-9_]*, constants T and F, and the
// connectives ~ & | -> <-> [] <>. Formulas live in an arena and are
// interned: structurally equal subtrees share one id, so comparing ids
// compares structure. Ids are only meaningful relative to their arena.

enum class FK : uint8_t {
    Letter, Top, Bottom, Not, And, Or, Implies, Iff, Diamond, Box
};

using FormulaId = uint32_t;

struct FormulaNode {
    FK kind;
    uint32_t a = 0;  // letter index, or the only / left child
    uint32_t b = 0;  // right child of a binary connective
};

inline bool is_binary(FK k) {
    return k == FK::And || k == FK::Or || k == FK::Implies || k == FK::Iff;
}
inline bool is_unary(FK k) {
    return k == FK::Not || k == FK::Diamond || k == FK::Box;
}
inline bool is_modal(FK k) { return k == FK::Diamond || k == FK::Box; }

class FormulaArena {
public:
    // Letter names must match [a-z][a-z0-9_]*.
    FormulaId letter(const std::string& name);
    FormulaId top() { return intern(FK::Top, 0, 0); }
    FormulaId bottom() { return intern(FK::Bottom, 0, 0); }
    FormulaId neg(FormulaId f) { return intern(FK::Not, check(f), 0); }
    FormulaId conj(FormulaId l, FormulaId r) { return intern(FK::And, check(l), check(r)); }
    FormulaId disj(FormulaId l, FormulaId r) { return intern(FK::Or, check(l), check(r)); }
    FormulaId implies(FormulaId l, FormulaId r) { return intern(FK::Implies, check(l), check(r)); }
    FormulaId iff(FormulaId l, FormulaId r) { return intern(FK::Iff, check(l), check(r)); }
    FormulaId diamond(FormulaId f) { return intern(FK::Diamond, check(f), 0); }
    FormulaId box(FormulaId f) { return intern(FK::Box, check(f), 0); }

    const FormulaNode& node(FormulaId f) const { return nodes_.at(f); }
    FK kind(FormulaId f) const { return nodes_.at(f).kind; }
    FormulaId child(FormulaId f) const;  // operand of a unary / left of a binary
    FormulaId right(FormulaId f) const;  // right of a binary
    uint32_t letter_index(FormulaId f) const;
    const std::string& letter_name(uint32_t index) const { return letter_names_.at(index); }
    size_t letter_count() const { return letter_names_.size(); }
    bool knows_letter(const std::string& name) const {
        return letter_ids_.count(name) != 0;
    }

    // Rewrites ~a to a -> F and a <-> b to (a -> b) & (b -> a), bottom up.
    // Memoized; the result of a desugared formula is itself.
    FormulaId desugar(FormulaId f);

private:
    uint32_t check(FormulaId f) const;
    FormulaId intern(FK k, uint32_t a, uint32_t b);

    std::vector<FormulaNode> nodes_;
    std::map<std::tuple<FK, uint32_t, uint32_t>, FormulaId> interned_;
    std::vector<std::string> letter_names_;
    std::unordered_map<std::string, uint32_t> letter_ids_;
    std::unordered_map<FormulaId, FormulaId> desugar_memo_;
};

// Renders with minimal parentheses. Binding, loosest to tightest:
// <->, -> (both right-associative), |, &, then the prefixes ~ [] <>.
std::string print(const FormulaArena& ar, FormulaId f);

struct ParseResult {
    bool ok = false;
    FormulaId id = 0;
    size_t offset = 0;                  // character offset of the error
    std::vector<std::string> expected;  // what would have been accepted here
    std::string message;                // empty when ok
};

ParseResult parse(FormulaArena& ar, const std::string& text);

// parse() that throws PreconditionError with the diagnostic message.
FormulaId parse_or_throw(FormulaArena& ar, const std::string& text);

// Number of subformula occurrences, counted with multiplicity.
size_t formula_size(const FormulaArena& ar, FormulaId f);

// Letter indices in order of first occurrence (left to right).
std::vector<uint32_t> letters_of(const FormulaArena& ar, FormulaId f);

bool has_modal(const FormulaArena& ar, FormulaId f);

// All distinct subformulas including f itself, in post order (children
// before parents, left before right).
std::vector<FormulaId> subformulas(const FormulaArena& ar, FormulaId f);

// Simultaneous substitution: occurrences of each mapped letter are
// replaced in one pass, so replacements are never re-substituted.
FormulaId substitute(FormulaArena& ar, FormulaId f,
                     const std::map<uint32_t, FormulaId>& by_letter);

// Desugars, then prefixes every node with []. Rejects modal input.
FormulaId godel_translate(FormulaArena& ar, FormulaId f);

struct LetterRenaming {
    std::string old_name;
    size_t formula_index;
    std::string fresh_name;
};

struct RevariablizeResult {
    std::vector<FormulaId> formulas;
    std::vector<LetterRenaming> renaming;
};

// Gives every (letter, formula-position) pair its own fresh letter
// x0, x1, ... in first-occurrence order, skipping any xN already used by
// an input formula. The same letter in two input formulas comes out as
// two different fresh letters.
RevariablizeResult revariablize(FormulaArena& ar,
                                const std::vector<FormulaId>& fs);

}  // namespace topos4
