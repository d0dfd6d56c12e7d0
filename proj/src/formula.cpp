// ==== formula.cpp — arena, printer, parser, and syntactic transforms ====

#include "topos4/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace topos4 {

// ── Arena ──

static bool valid_letter_name(const std::string& s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

FormulaId FormulaArena::letter(const std::string& name) {
    if (!valid_letter_name(name)) {
        throw PreconditionError("letter name must match [a-z][a-z0-9_]*, got '" +
                                name + "'");
    }
    auto it = letter_ids_.find(name);
    uint32_t idx;
    if (it != letter_ids_.end()) {
        idx = it->second;
    } else {
        idx = static_cast<uint32_t>(letter_names_.size());
        letter_names_.push_back(name);
        letter_ids_.emplace(name, idx);
    }
    return intern(FK::Letter, idx, 0);
}

uint32_t FormulaArena::check(FormulaId f) const {
    if (f >= nodes_.size()) {
        throw PreconditionError("formula id " + std::to_string(f) +
                                " is not in this arena");
    }
    return f;
}

FormulaId FormulaArena::intern(FK k, uint32_t a, uint32_t b) {
    auto key = std::make_tuple(k, a, b);
    auto it = interned_.find(key);
    if (it != interned_.end()) return it->second;
    FormulaId id = static_cast<FormulaId>(nodes_.size());
    nodes_.push_back(FormulaNode{k, a, b});
    interned_.emplace(key, id);
    return id;
}

FormulaId FormulaArena::child(FormulaId f) const {
    const FormulaNode& n = nodes_.at(f);
    if (!is_unary(n.kind) && !is_binary(n.kind)) {
        throw PreconditionError("formula has no operand");
    }
    return n.a;
}

FormulaId FormulaArena::right(FormulaId f) const {
    const FormulaNode& n = nodes_.at(f);
    if (!is_binary(n.kind)) {
        throw PreconditionError("formula has no right operand");
    }
    return n.b;
}

uint32_t FormulaArena::letter_index(FormulaId f) const {
    const FormulaNode& n = nodes_.at(f);
    if (n.kind != FK::Letter) {
        throw PreconditionError("formula is not a letter");
    }
    return n.a;
}

FormulaId FormulaArena::desugar(FormulaId f) {
    check(f);
    auto memo = desugar_memo_.find(f);
    if (memo != desugar_memo_.end()) return memo->second;
    FormulaNode n = nodes_[f];  // copy: nodes_ may reallocate below
    FormulaId out;
    switch (n.kind) {
        case FK::Not:
            out = implies(desugar(n.a), bottom());
            break;
        case FK::Iff: {
            FormulaId l = desugar(n.a), r = desugar(n.b);
            out = conj(implies(l, r), implies(r, l));
            break;
        }
        case FK::And:
            out = conj(desugar(n.a), desugar(n.b));
            break;
        case FK::Or:
            out = disj(desugar(n.a), desugar(n.b));
            break;
        case FK::Implies:
            out = implies(desugar(n.a), desugar(n.b));
            break;
        case FK::Diamond:
            out = diamond(desugar(n.a));
            break;
        case FK::Box:
            out = box(desugar(n.a));
            break;
        default:
            out = f;
    }
    desugar_memo_.emplace(f, out);
    return out;
}

// ── Printer ──

// <-> binds loosest, then ->, |, &, then the prefix operators. Both
// arrow connectives associate to the right, | and & to the left, so a
// same-precedence child needs parentheses exactly on the "wrong" side.
static int binding(FK k) {
    switch (k) {
        case FK::Iff:     return 1;
        case FK::Implies: return 2;
        case FK::Or:      return 3;
        case FK::And:     return 4;
        case FK::Not:
        case FK::Diamond:
        case FK::Box:     return 5;
        default:          return 6;
    }
}

static void render(const FormulaArena& ar, FormulaId f, std::string& out) {
    const FormulaNode& n = ar.node(f);
    switch (n.kind) {
        case FK::Letter: out += ar.letter_name(n.a); return;
        case FK::Top:    out += 'T'; return;
        case FK::Bottom: out += 'F'; return;
        case FK::Not:
        case FK::Diamond:
        case FK::Box: {
            out += (n.kind == FK::Not) ? "~" : (n.kind == FK::Diamond) ? "<>" : "[]";
            bool wrap = binding(ar.kind(n.a)) < 5;
            if (wrap) out += '(';
            render(ar, n.a, out);
            if (wrap) out += ')';
            return;
        }
        default: {
            int my = binding(n.kind);
            bool right_assoc = (n.kind == FK::Implies || n.kind == FK::Iff);
            int lb = binding(ar.kind(n.a));
            int rb = binding(ar.kind(n.b));
            bool wrap_l = lb < my || (lb == my && right_assoc);
            bool wrap_r = rb < my || (rb == my && !right_assoc);
            const char* op = (n.kind == FK::And)     ? " & "
                             : (n.kind == FK::Or)    ? " | "
                             : (n.kind == FK::Implies) ? " -> "
                                                        : " <-> ";
            if (wrap_l) out += '(';
            render(ar, n.a, out);
            if (wrap_l) out += ')';
            out += op;
            if (wrap_r) out += '(';
            render(ar, n.b, out);
            if (wrap_r) out += ')';
            return;
        }
    }
}

std::string print(const FormulaArena& ar, FormulaId f) {
    std::string out;
    render(ar, f, out);
    return out;
}

// ── Parser ──

namespace {

enum class Tok { Letter, T, F, LPar, RPar, Not, Box, Dia, And, Or, Imp, Iff, End };

struct Token {
    Tok t;
    size_t off;
    std::string text;
};

struct ParseFail {
    size_t off;
    std::vector<std::string> expected;
    std::string got;
};

struct Lexer {
    const std::string& s;
    size_t pos = 0;

    Token next() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' ||
                                  s[pos] == '\n' || s[pos] == '\r')) {
            ++pos;
        }
        size_t off = pos;
        if (pos >= s.size()) return {Tok::End, off, "end of input"};
        char c = s[pos];
        switch (c) {
            case '(': ++pos; return {Tok::LPar, off, "("};
            case ')': ++pos; return {Tok::RPar, off, ")"};
            case '~': ++pos; return {Tok::Not, off, "~"};
            case '&': ++pos; return {Tok::And, off, "&"};
            case '|': ++pos; return {Tok::Or, off, "|"};
            case 'T': ++pos; return {Tok::T, off, "T"};
            case 'F': ++pos; return {Tok::F, off, "F"};
            case '[':
                if (pos + 1 < s.size() && s[pos + 1] == ']') {
                    pos += 2;
                    return {Tok::Box, off, "[]"};
                }
                throw ParseFail{pos + 1, {"']'"}, glyph(pos + 1)};
            case '-':
                if (pos + 1 < s.size() && s[pos + 1] == '>') {
                    pos += 2;
                    return {Tok::Imp, off, "->"};
                }
                throw ParseFail{pos + 1, {"'>'"}, glyph(pos + 1)};
            case '<':
                if (pos + 1 < s.size() && s[pos + 1] == '>') {
                    pos += 2;
                    return {Tok::Dia, off, "<>"};
                }
                if (pos + 2 < s.size() && s[pos + 1] == '-' && s[pos + 2] == '>') {
                    pos += 3;
                    return {Tok::Iff, off, "<->"};
                }
                throw ParseFail{pos + 1, {"'>'", "'->'"}, glyph(pos + 1)};
            default:
                if (c >= 'a' && c <= 'z') {
                    size_t start = pos;
                    ++pos;
                    while (pos < s.size() &&
                           ((s[pos] >= 'a' && s[pos] <= 'z') ||
                            (s[pos] >= '0' && s[pos] <= '9') || s[pos] == '_')) {
                        ++pos;
                    }
                    return {Tok::Letter, off, s.substr(start, pos - start)};
                }
                throw ParseFail{pos, {"a formula"}, glyph(pos)};
        }
    }

    std::string glyph(size_t at) const {
        if (at >= s.size()) return "end of input";
        return std::string("'") + s[at] + "'";
    }
};

const std::vector<std::string> kFormulaStarters = {
    "a letter", "'T'", "'F'", "'('", "'~'", "'[]'", "'<>'"};

struct Parser {
    FormulaArena& ar;
    Lexer lex;
    Token cur;

    Parser(FormulaArena& a, const std::string& text) : ar(a), lex{text} {
        cur = lex.next();
    }

    void advance() { cur = lex.next(); }

    FormulaId parse_iff() {
        FormulaId l = parse_imp();
        if (cur.t == Tok::Iff) {
            advance();
            return ar.iff(l, parse_iff());
        }
        return l;
    }

    FormulaId parse_imp() {
        FormulaId l = parse_or();
        if (cur.t == Tok::Imp) {
            advance();
            return ar.implies(l, parse_imp());
        }
        return l;
    }

    FormulaId parse_or() {
        FormulaId l = parse_and();
        while (cur.t == Tok::Or) {
            advance();
            l = ar.disj(l, parse_and());
        }
        return l;
    }

    FormulaId parse_and() {
        FormulaId l = parse_unary();
        while (cur.t == Tok::And) {
            advance();
            l = ar.conj(l, parse_unary());
        }
        return l;
    }

    FormulaId parse_unary() {
        switch (cur.t) {
            case Tok::Not:
                advance();
                return ar.neg(parse_unary());
            case Tok::Box:
                advance();
                return ar.box(parse_unary());
            case Tok::Dia:
                advance();
                return ar.diamond(parse_unary());
            default:
                return parse_atom();
        }
    }

    FormulaId parse_atom() {
        switch (cur.t) {
            case Tok::Letter: {
                FormulaId f = ar.letter(cur.text);
                advance();
                return f;
            }
            case Tok::T: advance(); return ar.top();
            case Tok::F: advance(); return ar.bottom();
            case Tok::LPar: {
                advance();
                FormulaId f = parse_iff();
                if (cur.t != Tok::RPar) {
                    throw ParseFail{cur.off, {"')'"}, cur.text};
                }
                advance();
                return f;
            }
            default:
                throw ParseFail{cur.off, kFormulaStarters, cur.text};
        }
    }
};

}  // namespace

ParseResult parse(FormulaArena& ar, const std::string& text) {
    ParseResult res;
    try {
        Parser p(ar, text);
        FormulaId f = p.parse_iff();
        if (p.cur.t != Tok::End) {
            throw ParseFail{p.cur.off,
                            {"'&'", "'|'", "'->'", "'<->'", "end of input"},
                            p.cur.text};
        }
        res.ok = true;
        res.id = f;
        return res;
    } catch (const ParseFail& e) {
        res.ok = false;
        res.offset = e.off;
        res.expected = e.expected;
        std::ostringstream msg;
        msg << "syntax error at offset " << e.off << ": expected ";
        for (size_t i = 0; i < e.expected.size(); ++i) {
            if (i > 0) msg << (i + 1 == e.expected.size() ? " or " : ", ");
            msg << e.expected[i];
        }
        msg << ", got " << (e.got.empty() ? "end of input" : e.got);
        res.message = msg.str();
        return res;
    }
}

FormulaId parse_or_throw(FormulaArena& ar, const std::string& text) {
    ParseResult r = parse(ar, text);
    if (!r.ok) throw PreconditionError(r.message);
    return r.id;
}

// ── Syntactic measures and transforms ──

size_t formula_size(const FormulaArena& ar, FormulaId f) {
    std::unordered_map<FormulaId, size_t> memo;
    std::function<size_t(FormulaId)> go = [&](FormulaId g) -> size_t {
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        const FormulaNode& n = ar.node(g);
        size_t s = 1;
        if (is_unary(n.kind)) s += go(n.a);
        if (is_binary(n.kind)) s += go(n.a) + go(n.b);
        memo.emplace(g, s);
        return s;
    };
    return go(f);
}

std::vector<uint32_t> letters_of(const FormulaArena& ar, FormulaId f) {
    std::vector<uint32_t> out;
    std::set<uint32_t> seen_letters;
    std::set<FormulaId> visited;
    std::function<void(FormulaId)> go = [&](FormulaId g) {
        if (!visited.insert(g).second) return;
        const FormulaNode& n = ar.node(g);
        if (n.kind == FK::Letter) {
            if (seen_letters.insert(n.a).second) out.push_back(n.a);
            return;
        }
        if (is_unary(n.kind)) go(n.a);
        if (is_binary(n.kind)) {
            go(n.a);
            go(n.b);
        }
    };
    go(f);
    return out;
}

bool has_modal(const FormulaArena& ar, FormulaId f) {
    std::set<FormulaId> visited;
    std::function<bool(FormulaId)> go = [&](FormulaId g) -> bool {
        if (!visited.insert(g).second) return false;
        const FormulaNode& n = ar.node(g);
        if (is_modal(n.kind)) return true;
        if (is_unary(n.kind)) return go(n.a);
        if (is_binary(n.kind)) return go(n.a) || go(n.b);
        return false;
    };
    return go(f);
}

std::vector<FormulaId> subformulas(const FormulaArena& ar, FormulaId f) {
    std::vector<FormulaId> out;
    std::set<FormulaId> seen;
    std::function<void(FormulaId)> go = [&](FormulaId g) {
        if (seen.count(g)) return;
        const FormulaNode& n = ar.node(g);
        if (is_unary(n.kind)) go(n.a);
        if (is_binary(n.kind)) {
            go(n.a);
            go(n.b);
        }
        if (seen.insert(g).second) out.push_back(g);
    };
    go(f);
    return out;
}

FormulaId substitute(FormulaArena& ar, FormulaId f,
                     const std::map<uint32_t, FormulaId>& by_letter) {
    std::unordered_map<FormulaId, FormulaId> memo;
    std::function<FormulaId(FormulaId)> go = [&](FormulaId g) -> FormulaId {
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        FormulaNode n = ar.node(g);  // copy: building may grow the arena
        FormulaId out;
        switch (n.kind) {
            case FK::Letter: {
                auto hit = by_letter.find(n.a);
                out = (hit != by_letter.end()) ? hit->second : g;
                break;
            }
            case FK::Not:     out = ar.neg(go(n.a)); break;
            case FK::Diamond: out = ar.diamond(go(n.a)); break;
            case FK::Box:     out = ar.box(go(n.a)); break;
            case FK::And:     out = ar.conj(go(n.a), go(n.b)); break;
            case FK::Or:      out = ar.disj(go(n.a), go(n.b)); break;
            case FK::Implies: out = ar.implies(go(n.a), go(n.b)); break;
            case FK::Iff:     out = ar.iff(go(n.a), go(n.b)); break;
            default:          out = g;
        }
        memo.emplace(g, out);
        return out;
    };
    return go(f);
}

FormulaId godel_translate(FormulaArena& ar, FormulaId f) {
    if (has_modal(ar, f)) {
        throw PreconditionError(
            "godel_translate takes a modality-free formula, got: " + print(ar, f));
    }
    FormulaId d = ar.desugar(f);
    std::unordered_map<FormulaId, FormulaId> memo;
    std::function<FormulaId(FormulaId)> go = [&](FormulaId g) -> FormulaId {
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        FormulaNode n = ar.node(g);
        FormulaId out;
        switch (n.kind) {
            case FK::And:     out = ar.box(ar.conj(go(n.a), go(n.b))); break;
            case FK::Or:      out = ar.box(ar.disj(go(n.a), go(n.b))); break;
            case FK::Implies: out = ar.box(ar.implies(go(n.a), go(n.b))); break;
            default:          out = ar.box(g); break;  // letter, T, F
        }
        memo.emplace(g, out);
        return out;
    };
    return go(d);
}

RevariablizeResult revariablize(FormulaArena& ar,
                                const std::vector<FormulaId>& fs) {
    std::set<std::string> taken;
    for (FormulaId f : fs) {
        for (uint32_t idx : letters_of(ar, f)) taken.insert(ar.letter_name(idx));
    }
    size_t counter = 0;
    auto fresh = [&]() {
        for (;;) {
            std::string name = "x" + std::to_string(counter++);
            if (!taken.count(name)) return name;
        }
    };
    RevariablizeResult res;
    for (size_t k = 0; k < fs.size(); ++k) {
        std::map<uint32_t, FormulaId> sub;
        for (uint32_t idx : letters_of(ar, fs[k])) {
            std::string name = fresh();
            res.renaming.push_back({ar.letter_name(idx), k, name});
            sub[idx] = ar.letter(name);
        }
        res.formulas.push_back(substitute(ar, fs[k], sub));
    }
    return res;
}

}  // namespace topos4
