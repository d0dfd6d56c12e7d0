#!/usr/bin/env python3
"""Reference combinatorics for the frames/genspace tests: fork and cluster
relation sizes, disjoint unions, quotients, the glued two-forks frame, and
catalog counts of labeled preorders (rooted / connected / posets).
"""

from itertools import product


def fork(alpha):
    """Worlds: r=0, m=1, cluster = 2..2+alpha-1. Returns (n, set of pairs)."""
    n = 2 + alpha
    rel = {(0, 0), (1, 1), (0, 1)}
    for i in range(alpha):
        rel.add((0, 2 + i))
        for j in range(alpha):
            rel.add((2 + i, 2 + j))
    return n, rel


def cluster(n):
    return n, {(i, j) for i in range(n) for j in range(n)}


for a in (1, 2, 3):
    n, rel = fork(a)
    print(f"fork F_{a}: {n} worlds, {len(rel)} pairs", sorted(rel) if a == 1 else "")

n1, r1 = fork(1)
print("disjoint_union [F_1, F_1]:", 2 * n1, "worlds,", 2 * len(r1), "pairs")

print("\n== clusters of F_1 ==")
n, rel = fork(1)
R = {w: {v for v in range(n) if (w, v) in rel} for w in range(n)}
blocks = []
seen = set()
for w in range(n):
    if w in seen:
        continue
    b = {v for v in range(n) if (w, v) in rel and (v, w) in rel}
    blocks.append(sorted(b))
    seen |= b
print("blocks:", blocks)
print("maximal blocks:", [b for b in blocks if set().union(*[R[w] for w in b]) == set(b)])

print("\n== quotient C_3 by partition {{0,1},{2}} ==")
n, rel = cluster(3)
blockof = {0: 0, 1: 0, 2: 1}
q = {(blockof[a], blockof[b]) for (a, b) in rel}
print("quotient pairs:", sorted(q), "= full relation on 2:", q == {(i, j) for i in range(2) for j in range(2)})

print("\n== glue two F_1 copies along their maximal point m ==")
# Parts get worlds 0..2 and 3..5 (r,m,w0 each); identify the two m's (1 and 4).
# Representative of the merged class: least (part, world) = part-0 world 1.
# Quotient carrier (canonical order): part0 r, part0 m(=shared), part0 w0, part1 r, part1 w0.
n, rel = fork(1)
pairs = set()
names = {}
rep = {}
idx = 0
for part in range(2):
    for w in range(n):
        if part == 1 and w == 1:
            rep[(part, w)] = rep[(0, 1)]
            continue
        rep[(part, w)] = idx
        names[idx] = f"p{part}.{['r','m','w'][w]}"
        idx += 1
for part in range(2):
    for (a, b) in rel:
        pairs.add((rep[(part, a)], rep[(part, b)]))
print("glued worlds:", idx, "pairs:", len(pairs))
print("relation:", sorted(pairs))
print("names:", names)
roots = [w for w in range(idx) if {v for (a, v) in pairs if a == w} | {w} == set(range(idx))]
print("roots of glued frame:", [names[w] for w in roots] if roots else "none")

print("\n== labeled preorder catalog counts, n = 1..4 ==")


def preorders(n):
    out = []
    for bits in range(1 << (n * n)):
        R = [[bits >> (w * n + v) & 1 for v in range(n)] for w in range(n)]
        if any(not R[w][w] for w in range(n)):
            continue
        ok = True
        for w in range(n):
            for v in range(n):
                if R[w][v]:
                    for u in range(n):
                        if R[v][u] and not R[w][u]:
                            ok = False
        if ok:
            out.append(R)
    return out


def is_rooted(R):
    n = len(R)
    return any(all(R[w][v] for v in range(n)) for w in range(n))


def is_poset(R):
    n = len(R)
    return all(not (R[a][b] and R[b][a]) for a in range(n) for b in range(n) if a != b)


def is_connected(R):
    n = len(R)
    seen = {0}
    stack = [0]
    while stack:
        w = stack.pop()
        for v in range(n):
            if v not in seen and (R[w][v] or R[v][w]):
                seen.add(v)
                stack.append(v)
    return len(seen) == n


def iso_classes(frames):
    from itertools import permutations
    canon = set()
    for R in frames:
        n = len(R)
        best = min(tuple(R[p[w]][p[v]] for w in range(n) for v in range(n))
                   for p in permutations(range(n)))
        canon.add(best)
    return len(canon)


tot_rooted = 0
tot_rooted_iso = 0
for n in range(1, 5):
    ps = preorders(n)
    rooted = [R for R in ps if is_rooted(R)]
    posets = [R for R in ps if is_poset(R)]
    conn = [R for R in ps if is_connected(R)]
    tot_rooted += len(rooted)
    tot_rooted_iso += iso_classes(rooted)
    print(f"n={n}: preorders={len(ps)} rooted={len(rooted)} rooted-iso={iso_classes(rooted)}"
          f" posets={len(posets)} connected={len(conn)}")
print("total rooted labeled (n<=4):", tot_rooted, " total rooted iso classes:", tot_rooted_iso)
