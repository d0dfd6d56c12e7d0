#!/usr/bin/env python3
"""Reference finite-topology facts used to freeze expected values for the
genspace and algebra tests: specialization orders, upset topologies, sums,
and field generation under a closure operator.
"""

from itertools import combinations


def closure_from_opens(s, n, opens):
    closed = [frozenset(range(n)) - o for o in opens]
    out = frozenset(range(n))
    for c in closed:
        if s <= c and len(c) < len(out):
            out = c
    # smallest closed superset = intersection of all closed supersets
    res = frozenset(range(n))
    for c in closed:
        if s <= c:
            res &= c
    return res


def specialization(n, opens):
    rel = set()
    for x in range(n):
        for y in range(n):
            if x in closure_from_opens(frozenset({y}), n, opens):
                rel.add((x, y))
    return rel


SIER = [frozenset(), frozenset({1}), frozenset({0, 1})]
print("Sierpinski specialization:", sorted(specialization(2, SIER)))

DISC = [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]
print("discrete 2-pt specialization:", sorted(specialization(2, DISC)))
INDISC = [frozenset(), frozenset({0, 1})]
print("indiscrete 2-pt specialization:", sorted(specialization(2, INDISC)))


def upset_topology(n, rel):
    outs = []
    for bits in range(1 << n):
        s = frozenset(w for w in range(n) if bits >> w & 1)
        if all(v in s for w in s for v in range(n) if (w, v) in rel):
            outs.append(s)
    return outs


print("\nC_2 upset topology:", sorted(map(sorted, upset_topology(2, {(0, 0), (0, 1), (1, 0), (1, 1)}))))
print("2-chain upset topology:", sorted(map(sorted, upset_topology(2, {(0, 0), (0, 1), (1, 1)}))))

print("\n== sum of two Sierpinski spaces (carrier 0,1 + 2,3; open iff both traces open) ==")
opens = []
for o1 in SIER:
    for o2 in SIER:
        opens.append(o1 | frozenset(x + 2 for x in o2))
print("open count:", len(opens))
print("opens:", sorted(map(sorted, opens)))

print("\n== field generation: Sierpinski closure (c{1}=X, c{0}={0}), generator {1} ==")
# closure on subsets of {0,1}: c(emptyset)=empty, c({0})={0}, c({1})=X, c(X)=X
close = {frozenset(): frozenset(), frozenset({0}): frozenset({0}),
         frozenset({1}): frozenset({0, 1}), frozenset({0, 1}): frozenset({0, 1})}
fam = {frozenset(), frozenset({0, 1}), frozenset({1})}
changed = True
while changed:
    changed = False
    for s in list(fam):
        for t in [frozenset({0, 1}) - s, close[s]] + [s & u for u in fam]:
            if t not in fam:
                fam.add(t)
                changed = True
print("generated family:", sorted(map(sorted, fam)))

print("\n== descriptive checks: frame C_2 with field {empty, X} ==")
n = 2
rel = {(0, 0), (0, 1), (1, 0), (1, 1)}
field = [frozenset(), frozenset({0, 1})]
diff = all(any((x in A) != (y in A) for A in field) for x in range(n) for y in range(n) if x != y)
tight_fail = [(w, v) for w in range(n) for v in range(n) if (w, v) not in rel
              and not any(v in A and not any((u, x) in rel and x in A for x in A for u in [w] for x in A)
                          for A in field)]
# tightness: for every non-edge (w,v) there is A in field with v in A, w not in R^{-1}(A)
def r_inv(A):
    return frozenset(w for w in range(n) if any((w, v) in rel and v in A for v in A | frozenset(range(n))) and any((w, u) in rel and u in A for u in range(n)))
tight = all(any(v in A and w not in r_inv(A) for A in field)
            for w in range(n) for v in range(n) if (w, v) not in rel)
print("differentiated:", diff, " tight (vacuous, no non-edges):", tight,
      " non-edge count:", sum(1 for w in range(n) for v in range(n) if (w, v) not in rel))
