#!/usr/bin/env python3
"""Reference witness-selection procedure used to freeze expected kept-sets
for the selection tests.

Starting from the refutation world plus any seed, each round keeps, for every
kept world v, one witness successor for every diamond subformula true at v
and for every box subformula false at v (least world index), until closure.
The truth lemma is then checked: every subformula holds at a kept world in
the restricted structure iff it held there originally.
"""

from modal_eval import evaluate, subformulas

P = ("letter", "p")


def select(n, R, phi, val, w0, seed=()):
    worlds = set(range(n))
    phi_val = evaluate(phi, val, worlds, R)
    assert w0 not in phi_val, "phi must be refuted at w0"
    subs = subformulas(phi)
    kept = {w0} | set(seed)
    log = []
    while True:
        add = set()
        for v in sorted(kept):
            for s in subs:
                if s[0] == "dia":
                    arg = evaluate(s[1], val, worlds, R)
                    if v in evaluate(s, val, worlds, R):
                        u = min(R[v] & arg)
                        if u not in kept:
                            log.append((v, s, u))
                        add.add(u)
                if s[0] == "box":
                    arg = evaluate(s[1], val, worlds, R)
                    if v not in evaluate(s, val, worlds, R):
                        u = min(R[v] - arg)
                        if u not in kept:
                            log.append((v, s, u))
                        add.add(u)
        if add <= kept:
            break
        kept |= add
    # truth lemma in the restricted frame
    keptR = {v: R[v] & kept for v in kept}
    restr_val = {k: v & kept for k, v in val.items()}
    ok = True
    for s in subs:
        before = evaluate(s, val, worlds, R) & kept
        after = evaluate(s, restr_val, kept, keptR)
        if before != after:
            ok = False
    return sorted(kept), log, ok


print("== phi = p -> []p on the 2-chain (0 < 1), v(p)={0}, refuted at 0 ==")
R = {0: {0, 1}, 1: {1}}
phi = ("imp", P, ("box", P))
kept, log, ok = select(2, R, phi, {"p": frozenset({0})}, 0)
print("kept:", kept, " witnesses:", [(v, s[0], u) for v, s, u in log], " truth lemma:", ok)

print("\n== phi with no modal subformulas: p & ~p impossible, use p -> p refuted? none; use p | q at a world where it fails ==")
phi = ("or", P, ("letter", "q"))
kept, log, ok = select(2, R, phi, {"p": frozenset({1}), "q": frozenset()}, 0)
print("kept:", kept, " witnesses:", log, " truth lemma:", ok)

print("\n== seeded: fork F_1 (r=0,m=1,w0=2), phi = <>[]p -> []<>p, v(p)={m}, seed={m} ==")
R = {0: {0, 1, 2}, 1: {1}, 2: {2}}
phi = ("imp", ("dia", ("box", P)), ("box", ("dia", P)))
kept, log, ok = select(3, R, phi, {"p": frozenset({1})}, 0, seed=(1,))
print("kept:", kept, " witnesses:", [(v, s[0], u) for v, s, u in log], " truth lemma:", ok)
