#!/usr/bin/env python3
"""Oracle for the staged rational-point labeling (q_stage).

Stage 0 places 1/2 labeled with the frame root. Each later stage s gives
every existing point x two flank points x +- 1/(2 * 4**s); the flanks of a
point labeled w take the next two entries of the cyclic enumeration of
R(w), advancing a per-point cursor (left flank first).

Facts frozen into C++ tests are printed at the bottom.
"""
from fractions import Fraction


def successors(rel, n, w):
    return sorted(v for v in range(n) if (w, v) in rel)


def q_stage(n, rel, root, k):
    # points: x -> [label, born_stage, cursor]
    points = {Fraction(1, 2): [root, 0, 0]}
    for s in range(1, k + 1):
        eps = Fraction(1, 2 * 4**s)
        for x in sorted(points):
            lab, born, cur = points[x]
            if born >= s:
                continue
            succ = successors(rel, n, lab)
            for side, dx in ((0, -eps), (1, eps)):
                y = x + dx
                assert y not in points, (x, y, s)
                assert 0 < y < 1
                points[y] = [succ[(cur + side) % len(succ)], s, 0]
            points[x][2] = (cur + 2) % len(succ)
    return points


def coverage(n, rel, points):
    """For each point x labeled w: which v in R(w) appear on x's own flanks
    across all stages it was alive for (plus w itself at x)."""
    cov = {}
    pts = sorted(points)
    for x in pts:
        lab = points[x][0]
        cov[x] = {lab}
    k = max(b for _, b, _ in points.values())
    # replay to attribute flanks
    replay = {Fraction(1, 2): [points[Fraction(1, 2)][0], 0, 0]}
    for s in range(1, k + 1):
        eps = Fraction(1, 2 * 4**s)
        for x in sorted(replay):
            lab, born, cur = replay[x]
            if born >= s:
                continue
            succ = successors(rel, n, lab)
            for side, dx in ((0, -eps), (1, eps)):
                y = x + dx
                replay[y] = [succ[(cur + side) % len(succ)], s, 0]
                cov[x].add(succ[(cur + side) % len(succ)])
            replay[x][2] = (cur + 2) % len(succ)
    return cov


if __name__ == "__main__":
    # 2-chain: 0 <= 1
    n, root = 2, 0
    rel = {(0, 0), (0, 1), (1, 1)}
    k = 4
    pts = q_stage(n, rel, root, k)
    xs = sorted(pts)
    print("2-chain k=4: points =", len(pts), "(3^k =", 3**k, ")")
    print("strictly ordered distinct rationals:", len(set(xs)) == len(xs))
    print("all in (0,1):", all(0 < x < 1 for x in xs))
    cov = coverage(n, rel, pts)
    uncovered = [x for x in xs if cov[x] != set(successors(rel, n, pts[x][0]))]
    print("points lacking full R(w) coverage:", len(uncovered))
    print("  all born at final stage:",
          all(pts[x][1] == k for x in uncovered))
    early = [x for x in xs if pts[x][1] <= k - 1]
    print("points born <= stage", k - 1, ":", len(early),
          "all covered:", all(x not in uncovered for x in early))
