#!/usr/bin/env python3
"""Reference Heyting-algebra evaluation over upset lattices of finite posets,
plus the box-prefixing translation into modal logic, used to freeze expected
values for the algebra tests and to spot-check the correspondence

    upset algebra of P validates phi  <=>  powerset algebra of P validates T(phi)

on a handful of (poset, formula) pairs.
"""

from itertools import product
from modal_eval import evaluate as modal_eval, validates as modal_validates


def upsets(n, rel):
    out = []
    for bits in range(1 << n):
        s = frozenset(w for w in range(n) if bits >> w & 1)
        if all((v in s) for w in s for v in range(n) if (w, v) in rel):
            out.append(s)
    return out


def interior(s, opens):
    best = frozenset()
    for o in opens:
        if o <= s and len(o) > len(best):
            best = o
    # opens are closed under union, so the largest contained open is the union
    return frozenset().union(*[o for o in opens if o <= s]) if opens else best


def heyting_eval(f, val, full, opens):
    k = f[0]
    if k == "letter":
        return val[f[1]]
    if k == "top":
        return full
    if k == "bot":
        return frozenset()
    if k == "and":
        return heyting_eval(f[1], val, full, opens) & heyting_eval(f[2], val, full, opens)
    if k == "or":
        return heyting_eval(f[1], val, full, opens) | heyting_eval(f[2], val, full, opens)
    if k == "imp":
        a, b = heyting_eval(f[1], val, full, opens), heyting_eval(f[2], val, full, opens)
        return interior((full - a) | b, opens)
    if k == "not":
        return interior(full - heyting_eval(f[1], val, full, opens), opens)
    if k == "iff":
        l = heyting_eval(("imp", f[1], f[2]), val, full, opens)
        r = heyting_eval(("imp", f[2], f[1]), val, full, opens)
        return l & r
    raise ValueError(k)


def heyting_validates(f, letters, n, rel):
    opens = upsets(n, rel)
    full = frozenset(range(n))
    for assign in product(opens, repeat=len(letters)):
        val = dict(zip(letters, assign))
        if heyting_eval(f, val, full, opens) != full:
            return val
    return None


def desugar(f):
    k = f[0]
    if k == "not":
        return ("imp", desugar(f[1]), ("bot",))
    if k == "iff":
        a, b = desugar(f[1]), desugar(f[2])
        return ("and", ("imp", a, b), ("imp", b, a))
    if k in ("letter", "top", "bot"):
        return f
    return (k,) + tuple(desugar(c) for c in f[1:])


def godel(f):
    f = desugar(f)

    def t(g):
        if g[0] in ("letter", "top", "bot"):
            return ("box", g)
        return ("box", (g[0],) + tuple(t(c) for c in g[1:]))
    return t(f)


def count_boxes(f):
    n = 1 if f[0] == "box" else 0
    return n + sum(count_boxes(c) for c in f[1:] if isinstance(c, tuple))


P, Q = ("letter", "p"), ("letter", "q")
WLEM = ("or", ("not", P), ("not", ("not", P)))  # ~p | ~~p
LEM = ("or", P, ("not", P))
PEIRCE = ("imp", ("imp", ("imp", P, Q), P), P)

# 2-fork poset: r=0 below m1=1 and m2=2
FORK2 = (3, {(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)})
# 3-chain 0 < 1 < 2
CHAIN3 = (3, {(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)})

print("== 2-fork poset upsets ==")
print(sorted(map(sorted, upsets(*FORK2))))

print("\n== ~p | ~~p on the 2-fork upset algebra ==")
cv = heyting_validates(WLEM, ["p"], *FORK2)
print("countervaluation:", None if cv is None else sorted(cv["p"]))
val = {"p": frozenset({1})}
full = frozenset(range(3))
opens = upsets(*FORK2)
print("with v(p)={m1}: ~p =", sorted(heyting_eval(("not", P), val, full, opens)),
      " ~~p =", sorted(heyting_eval(("not", ("not", P)), val, full, opens)),
      " join =", sorted(heyting_eval(WLEM, val, full, opens)))

print("\n== ~p | ~~p on the 3-chain upset algebra ==")
print("countervaluation:", heyting_validates(WLEM, ["p"], *CHAIN3), "(None = valid; 4 opens)")

print("\n== translation shapes ==")
print("T(p) =", godel(P))
print("T(p->q) =", godel(("imp", P, Q)))
print("box count in T(~p | ~~p):", count_boxes(godel(WLEM)),
      "(= subformula occurrences of the desugared formula)")

print("\n== correspondence spot checks ==")
def letters_of(f, acc=None):
    if acc is None:
        acc = []
    if f[0] == "letter" and f[1] not in acc:
        acc.append(f[1])
    for c in f[1:]:
        if isinstance(c, tuple):
            letters_of(c, acc)
    return acc


for name, f in [("~p|~~p", WLEM), ("p|~p", LEM), ("peirce", PEIRCE), ("p->p", ("imp", P, P))]:
    for pname, (n, rel) in [("2-fork", FORK2), ("3-chain", CHAIN3)]:
        letters = sorted(letters_of(f))
        hv = heyting_validates(f, letters, n, rel)
        R = {w: frozenset(v for v in range(n) if (w, v) in rel) for w in range(n)}
        mv = modal_validates(godel(f), letters, set(range(n)), R)
        print(f"{name} on {pname}: heyting={'valid' if hv is None else 'refuted'}"
              f" modal-translation={'valid' if mv is None else 'refuted'}"
              f" agree={(hv is None) == (mv is None)}")

print("\n== intuitionistic formula space: atoms p,q,T,F; unary ~; binary &,|,-> ==")
# size = AST node count; counts feed the exhaustive-correspondence sweep
counts = {1: 4}
for s in range(2, 8):
    c = counts[s - 1]  # ~phi
    for a in range(1, s - 1):
        c += 3 * counts[a] * counts[s - 1 - a]
    counts[s] = c
print("per-size counts:", [counts[s] for s in range(1, 8)])
print("total size <= 7:", sum(counts.values()))

# explicit enumeration of a small size as a consistency check on the recurrence
def enum(s):
    if s == 1:
        return [("letter", "p"), ("letter", "q"), ("top",), ("bot",)]
    out = [("not", f) for f in enum(s - 1)]
    for a in range(1, s - 1):
        for fa in enum(a):
            for fb in enum(s - 1 - a):
                out.extend([("and", fa, fb), ("or", fa, fb), ("imp", fa, fb)])
    return out

print("enumerated size-4 count:", len(enum(4)), "(recurrence says", counts[4], ")")
