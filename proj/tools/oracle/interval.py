#!/usr/bin/env python3
"""Reference middle-thirds construction with exact fractions, used to freeze
expected values for the interval tests.

Families: U[0] is the family of middle-third intervals removed from [0,1]
(removal level i, position j = 1..2^i counted left to right). Every member I
of U[k] hosts a scaled copy of the whole construction inside its closure;
U[k+1] collects the removed intervals of those copies. The label of a member
extends its host's label by one bit: 1 when its position index j is odd,
0 when j is even. The label of [0,1] is the empty sequence.

label_of_point follows a point x down the nesting: the chain stops at step m
exactly when x lands in the Cantor set of its current host interval.
"""

from fractions import Fraction as Fr


def removed_intervals(a, b, max_i):
    """Middle thirds removed from [a,b], levels 0..max_i, left to right.
    Yields (i, j, lo, hi)."""
    for i in range(max_i + 1):
        kept = [(a, b)]
        for _ in range(i):
            nxt = []
            for (lo, hi) in kept:
                t = (hi - lo) / 3
                nxt += [(lo, lo + t), (hi - t, hi)]
            kept = nxt
        for j, (lo, hi) in enumerate(kept, start=1):
            t = (hi - lo) / 3
            yield (i, j, lo + t, hi - t)


def in_cantor(x, a, b):
    """Exact test: x in the Cantor set built on [a,b]."""
    if x < a or x > b:
        return False
    t = (x - a) / (b - a)
    seen = set()
    while True:
        if t in seen:
            return True
        seen.add(t)
        if t <= Fr(1, 3):
            t = 3 * t
        elif t >= Fr(2, 3):
            t = 3 * t - 2
        else:
            return False


def containing_removed(x, a, b):
    """The removed interval of [a,b]'s construction containing x (x not in
    the Cantor set of [a,b]). Returns (i, j, lo, hi)."""
    t = (x - a) / (b - a)
    lo, hi = Fr(0), Fr(1)
    i = 0
    j = 1
    while True:
        third = (hi - lo) / 3
        if t < lo + third:
            hi = lo + third
            i += 1
            j = 2 * j - 1
        elif t > hi - third:
            lo = hi - third
            i += 1
            j = 2 * j
        else:
            scale = b - a
            return (i, j, a + scale * (lo + third), a + scale * (hi - third))


def label_chain(x, k):
    """Labels L_0..L_k(x) (chain may stop early). Returns list of bit strings."""
    a, b = Fr(0), Fr(1)
    label = ""
    chain = [label]
    for _ in range(k):
        if in_cantor(x, a, b):
            return chain, True
        i, j, lo, hi = containing_removed(x, a, b)
        label += "1" if j % 2 == 1 else "0"
        chain.append(label)
        a, b = lo, hi
    return chain, in_cantor(x, a, b)


print("== U[0] members at levels 0..2 with labels ==")
for (i, j, lo, hi) in removed_intervals(Fr(0), Fr(1), 2):
    print(f"i={i} j={j}  ({lo},{hi})  label={'1' if j % 2 else '0'}")

print("\n== children of (1/3,2/3) [label '1'] at its levels 0..1 ==")
for (i, j, lo, hi) in removed_intervals(Fr(1, 3), Fr(2, 3), 1):
    print(f"i={i} j={j}  ({lo},{hi})  label=1{'1' if j % 2 else '0'}")

print("\n== label chains ==")
for x, k in [(Fr(0), 4), (Fr(1, 2), 8), (Fr(1, 3), 4), (Fr(1, 4), 6), (Fr(17, 27), 5)]:
    chain, stopped = label_chain(x, k)
    print(f"x={x} k={k}: chain={['e' if c == '' else c for c in chain]} stopped={stopped}")

print("\n== removed-length sum for [0,1], levels 0..5 ==")
total = sum(hi - lo for (_, _, lo, hi) in removed_intervals(Fr(0), Fr(1), 5))
print("sum:", total, "= 1-(2/3)^6:", 1 - Fr(2, 3) ** 6)

print("\n== family sizes and max lengths under the shrinking level budget ==")
# Family U[k] is built with removal levels i <= depth - k (depth = 5 here):
# every deeper removal lives inside a surviving closed stage instead.
depth = 5
fam = [list(removed_intervals(Fr(0), Fr(1), depth))]
labels = [{(i, j, lo, hi): ("1" if j % 2 else "0") for (i, j, lo, hi) in fam[0]}]
for k in range(1, depth + 1):
    nxt = []
    lnxt = {}
    for (pi, pj, plo, phi) in fam[k - 1]:
        for (i, j, lo, hi) in removed_intervals(plo, phi, depth - k):
            nxt.append((i, j, lo, hi))
            lnxt[(i, j, lo, hi)] = labels[k - 1][(pi, pj, plo, phi)] + ("1" if j % 2 else "0")
    fam.append(nxt)
    labels.append(lnxt)
for k, f in enumerate(fam):
    lens = sorted((hi - lo for (_, _, lo, hi) in f), reverse=True)
    distinct = {labels[k][m] for m in f}
    print(f"U[{k}]: {len(f)} members, max length {lens[0]} (=1/3^{k+1}: {lens[0] == Fr(1, 3 ** (k + 1))}),"
          f" distinct labels {len(distinct)} (=2^{k+1}: {len(distinct) == 2 ** (k + 1)})")

print("\n== pairwise disjointness inside each family ==")
ok = True
for f in fam:
    srt = sorted(f, key=lambda m: m[2])
    for a, b in zip(srt, srt[1:]):
        if a[3] > b[2]:
            ok = False
print("all families pairwise disjoint:", ok)
