#!/usr/bin/env python3
"""Reference Kripke-frame evaluator used to freeze expected values for the
algebra and formula tests. Independent of the C++ code: formulas are Python
tuples, sets are Python frozensets, diamonds evaluate through R-preimages.

Formula encoding: ("letter", name) | ("top",) | ("bot",) | ("not", a)
| ("and", a, b) | ("or", a, b) | ("imp", a, b) | ("iff", a, b)
| ("dia", a) | ("box", a)
"""

from itertools import product


def subformulas(f, acc=None):
    """Post-order, deduplicated, includes f itself."""
    if acc is None:
        acc = []
    for child in f[1:]:
        if isinstance(child, tuple):
            subformulas(child, acc)
    if f not in acc:
        acc.append(f)
    return acc


def evaluate(f, val, worlds, R):
    """Returns the set of worlds where f holds. R[w] = successor set."""
    k = f[0]
    if k == "letter":
        return val[f[1]]
    if k == "top":
        return frozenset(worlds)
    if k == "bot":
        return frozenset()
    if k == "not":
        return frozenset(worlds) - evaluate(f[1], val, worlds, R)
    if k == "and":
        return evaluate(f[1], val, worlds, R) & evaluate(f[2], val, worlds, R)
    if k == "or":
        return evaluate(f[1], val, worlds, R) | evaluate(f[2], val, worlds, R)
    if k == "imp":
        return (frozenset(worlds) - evaluate(f[1], val, worlds, R)) | evaluate(f[2], val, worlds, R)
    if k == "iff":
        a, b = evaluate(f[1], val, worlds, R), evaluate(f[2], val, worlds, R)
        return frozenset(w for w in worlds if (w in a) == (w in b))
    if k == "dia":
        a = evaluate(f[1], val, worlds, R)
        return frozenset(w for w in worlds if R[w] & a)
    if k == "box":
        a = evaluate(f[1], val, worlds, R)
        return frozenset(w for w in worlds if R[w] <= a)
    raise ValueError(k)


def validates(f, letters, worlds, R):
    """Exhaustive search over powerset valuations; returns None or a countervaluation."""
    subsets = [frozenset(s) for n in range(len(worlds) + 1)
               for s in __import__("itertools").combinations(sorted(worlds), n)]
    for assign in product(subsets, repeat=len(letters)):
        val = dict(zip(letters, assign))
        res = evaluate(f, val, worlds, R)
        if res != frozenset(worlds):
            return val, sorted(frozenset(worlds) - res)
    return None


P = ("letter", "p")
S42 = ("imp", ("dia", ("box", P)), ("box", ("dia", P)))  # <>[]p -> []<>p
GRZ = ("imp", ("box", ("imp", ("box", ("imp", P, ("box", P))), P)), P)

print("== subformula counts ==")
print("dia-box-p -> box-dia-p:", len(subformulas(S42)))
print("order:", [s[0] for s in subformulas(S42)])

print("\n== fork F_1 (r=0, m=1, w0=2), S4.2 axiom, v(p)={m} ==")
worlds = {0, 1, 2}
R = {0: frozenset({0, 1, 2}), 1: frozenset({1}), 2: frozenset({2})}
res = evaluate(S42, {"p": frozenset({1})}, worlds, R)
print("value:", sorted(res), " (carrier minus", sorted(worlds - res), ")")

print("\n== fork F_1 validates S4.2 axiom? ==")
cv = validates(S42, ["p"], worlds, R)
print("countervaluation:", None if cv is None else (sorted(cv[0]["p"]), "fails at", cv[1]))

print("\n== C_2 (total relation on 2) vs Grz axiom ==")
worlds2 = {0, 1}
R2 = {0: frozenset({0, 1}), 1: frozenset({0, 1})}
cv = validates(GRZ, ["p"], worlds2, R2)
print("countervaluation:", None if cv is None else (sorted(cv[0]["p"]), "fails at", cv[1]))

print("\n== S4 axioms valid on every preorder with |W| <= 3 (spot soundness) ==")
Q = ("letter", "q")
AXIOMS = [
    ("imp", ("dia", ("dia", P)), ("dia", P)),
    ("imp", P, ("dia", P)),
    ("iff", ("dia", ("or", P, Q)), ("or", ("dia", P), ("dia", Q))),
    ("iff", ("dia", ("bot",)), ("bot",)),
]
count = 0
bad = 0
n = 3
for bits in range(1 << (n * n)):
    R3 = {w: frozenset(v for v in range(n) if bits >> (w * n + v) & 1) for w in range(n)}
    if any(w not in R3[w] for w in range(n)):
        continue
    if any(not R3[v] <= R3[w] for w in range(n) for v in R3[w]):
        continue
    count += 1
    for ax in AXIOMS:
        if validates(ax, sorted({x[1] for x in subformulas(ax) if x[0] == "letter"}),
                     set(range(n)), R3) is not None:
            bad += 1
print("preorders on 3 labeled worlds:", count, " axiom failures:", bad)
