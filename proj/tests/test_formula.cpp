// ==== test_formula.cpp — arena, parser, printer, transform tests ====

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "topos4/formula.hpp"

using namespace topos4;

// Counts nodes of one kind with multiplicity (tree occurrences).
static size_t count_kind(const FormulaArena& ar, FormulaId f, FK k) {
    const FormulaNode& n = ar.node(f);
    size_t c = (n.kind == k) ? 1 : 0;
    if (is_unary(n.kind)) c += count_kind(ar, n.a, k);
    if (is_binary(n.kind)) c += count_kind(ar, n.a, k) + count_kind(ar, n.b, k);
    return c;
}

TEST_CASE("interning gives structural equality by id") {
    FormulaArena ar;
    FormulaId p1 = ar.letter("p");
    FormulaId p2 = ar.letter("p");
    CHECK(p1 == p2);
    FormulaId a = ar.implies(ar.box(p1), p1);
    FormulaId b = ar.implies(ar.box(p2), p2);
    CHECK(a == b);
    CHECK(ar.conj(p1, ar.letter("q")) != ar.conj(ar.letter("q"), p1));
}

TEST_CASE("letter names are validated") {
    FormulaArena ar;
    CHECK_NOTHROW(ar.letter("p"));
    CHECK_NOTHROW(ar.letter("p1_x"));
    CHECK_NOTHROW(ar.letter("zz09"));
    CHECK_THROWS_AS(ar.letter("P"), PreconditionError);
    CHECK_THROWS_AS(ar.letter("1p"), PreconditionError);
    CHECK_THROWS_AS(ar.letter(""), PreconditionError);
    CHECK_THROWS_AS(ar.letter("p-q"), PreconditionError);
}

TEST_CASE("printer inserts only the needed parentheses") {
    FormulaArena ar;
    auto roundtrip = [&](const std::string& in, const std::string& want) {
        ParseResult r = parse(ar, in);
        REQUIRE(r.ok);
        CHECK(print(ar, r.id) == want);
    };
    roundtrip("p -> (q -> r)", "p -> q -> r");
    roundtrip("(p -> q) -> r", "(p -> q) -> r");
    roundtrip("p | (q & r)", "p | q & r");
    roundtrip("(p | q) & r", "(p | q) & r");
    roundtrip("p & q & r", "p & q & r");
    roundtrip("p & (q & r)", "p & (q & r)");
    roundtrip("~(p | q)", "~(p | q)");
    roundtrip("~p | q", "~p | q");
    roundtrip("[]<>p", "[]<>p");
    roundtrip("~ [] p", "~[]p");
    roundtrip("a <-> b <-> c", "a <-> b <-> c");
    roundtrip("(a <-> b) <-> c", "(a <-> b) <-> c");
    roundtrip("<>(p -> q)", "<>(p -> q)");
    roundtrip("T & ~F", "T & ~F");
}

TEST_CASE("parse errors report offset and expected set") {
    FormulaArena ar;

    ParseResult r = parse(ar, "p ->");
    CHECK_FALSE(r.ok);
    CHECK(r.offset == 4);
    CHECK_FALSE(r.expected.empty());
    CHECK(r.message.find("offset 4") != std::string::npos);

    r = parse(ar, "p q");
    CHECK_FALSE(r.ok);
    CHECK(r.offset == 2);

    r = parse(ar, "");
    CHECK_FALSE(r.ok);
    CHECK(r.offset == 0);

    r = parse(ar, "(p -> q");
    CHECK_FALSE(r.ok);
    CHECK(r.offset == 7);

    r = parse(ar, "[p");
    CHECK_FALSE(r.ok);
    CHECK(r.offset == 1);

    r = parse(ar, "p $ q");
    CHECK_FALSE(r.ok);
    CHECK(r.offset == 2);

    r = parse(ar, "P");
    CHECK_FALSE(r.ok);
    CHECK(r.offset == 0);

    CHECK_THROWS_AS(parse_or_throw(ar, "p ->"), PreconditionError);
}

TEST_CASE("subformulas: post order, deduplicated, includes the formula") {
    FormulaArena ar;
    // values frozen from tools/oracle/modal_eval.py
    FormulaId phi = parse_or_throw(ar, "<>[]p -> []<>p");
    auto subs = subformulas(ar, phi);
    REQUIRE(subs.size() == 6);
    FK want[] = {FK::Letter, FK::Box, FK::Diamond, FK::Diamond, FK::Box,
                 FK::Implies};
    for (size_t i = 0; i < 6; ++i) CHECK(ar.kind(subs[i]) == want[i]);
    CHECK(subs.back() == phi);

    FormulaId pp = parse_or_throw(ar, "p & p");
    CHECK(subformulas(ar, pp).size() == 2);
}

TEST_CASE("formula_size counts occurrences with multiplicity") {
    FormulaArena ar;
    CHECK(formula_size(ar, parse_or_throw(ar, "[]p -> p")) == 4);
    CHECK(formula_size(ar, parse_or_throw(ar, "p")) == 1);
    CHECK(formula_size(ar, parse_or_throw(ar, "~p | ~~p")) == 6);
}

TEST_CASE("letters_of returns first-occurrence order") {
    FormulaArena ar;
    FormulaId f = parse_or_throw(ar, "q & p | q & r");
    auto ls = letters_of(ar, f);
    REQUIRE(ls.size() == 3);
    CHECK(ar.letter_name(ls[0]) == "q");
    CHECK(ar.letter_name(ls[1]) == "p");
    CHECK(ar.letter_name(ls[2]) == "r");
}

TEST_CASE("substitute is simultaneous") {
    FormulaArena ar;
    FormulaId f = parse_or_throw(ar, "p -> q");
    uint32_t p = ar.letter_index(ar.letter("p"));
    uint32_t q = ar.letter_index(ar.letter("q"));
    std::map<uint32_t, FormulaId> swap{{p, ar.letter("q")}, {q, ar.letter("p")}};
    CHECK(print(ar, substitute(ar, f, swap)) == "q -> p");

    // an unmapped letter stays put
    FormulaId g = parse_or_throw(ar, "p & r");
    std::map<uint32_t, FormulaId> only_p{{p, parse_or_throw(ar, "q | s")}};
    CHECK(print(ar, substitute(ar, g, only_p)) == "(q | s) & r");
}

TEST_CASE("desugar rewrites ~ and <-> and is idempotent") {
    FormulaArena ar;
    FormulaId p = ar.letter("p");
    FormulaId q = ar.letter("q");
    CHECK(ar.desugar(ar.neg(p)) == ar.implies(p, ar.bottom()));
    CHECK(ar.desugar(ar.iff(p, q)) ==
          ar.conj(ar.implies(p, q), ar.implies(q, p)));
    FormulaId nested = parse_or_throw(ar, "<>~p");
    CHECK(ar.desugar(nested) == ar.diamond(ar.implies(p, ar.bottom())));
    FormulaId f = parse_or_throw(ar, "~(p <-> q) | ~~p");
    CHECK(ar.desugar(ar.desugar(f)) == ar.desugar(f));
}

TEST_CASE("godel_translate boxes every node of the desugared formula") {
    FormulaArena ar;
    // values frozen from tools/oracle/heyting_godel.py
    FormulaId p = ar.letter("p");
    FormulaId q = ar.letter("q");

    FormulaId t = godel_translate(ar, ar.implies(p, q));
    CHECK(t == ar.box(ar.implies(ar.box(p), ar.box(q))));
    CHECK(print(ar, t) == "[]([]p -> []q)");

    FormulaId weak_em = parse_or_throw(ar, "~p | ~~p");
    CHECK(count_kind(ar, godel_translate(ar, weak_em), FK::Box) == 9);

    CHECK_THROWS_AS(godel_translate(ar, parse_or_throw(ar, "<>p")),
                    PreconditionError);
    CHECK_THROWS_AS(godel_translate(ar, parse_or_throw(ar, "[]p -> p")),
                    PreconditionError);
    CHECK(has_modal(ar, t));
    CHECK_FALSE(has_modal(ar, weak_em));
}

TEST_CASE("revariablize gives each (letter, formula) slot a fresh name") {
    FormulaArena ar;
    FormulaId p = ar.letter("p");

    auto r = revariablize(ar, {p, p});
    REQUIRE(r.formulas.size() == 2);
    CHECK(print(ar, r.formulas[0]) == "x0");
    CHECK(print(ar, r.formulas[1]) == "x1");
    REQUIRE(r.renaming.size() == 2);
    CHECK(r.renaming[0].old_name == "p");
    CHECK(r.renaming[0].formula_index == 0);
    CHECK(r.renaming[0].fresh_name == "x0");
    CHECK(r.renaming[1].formula_index == 1);
    CHECK(r.renaming[1].fresh_name == "x1");

    auto r2 = revariablize(ar, {parse_or_throw(ar, "p & q")});
    CHECK(print(ar, r2.formulas[0]) == "x0 & x1");

    // fresh names skip letters already present in the inputs
    auto r3 = revariablize(ar, {parse_or_throw(ar, "x0 & p")});
    CHECK(print(ar, r3.formulas[0]) == "x1 & x2");

    auto r4 = revariablize(ar, {});
    CHECK(r4.formulas.empty());
}

TEST_CASE("print then parse is the identity on 1000 random formulas") {
    FormulaArena ar;
    std::mt19937_64 rng(0);
    std::vector<std::string> letters{"p", "q", "r", "s"};
    for (int i = 0; i < 1000; ++i) {
        FormulaId f = testgen::random_formula(ar, rng, letters, 5);
        ParseResult r = parse(ar, print(ar, f));
        REQUIRE(r.ok);
        CHECK(r.id == f);
    }
}

TEST_CASE("whitespace and dense input parse alike") {
    FormulaArena ar;
    CHECK(parse_or_throw(ar, "p->q&~r") ==
          parse_or_throw(ar, "  p ->\tq & ~ r "));
    CHECK(parse_or_throw(ar, "[] <> p") == parse_or_throw(ar, "[]<>p"));
}
