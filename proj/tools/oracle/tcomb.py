#!/usr/bin/env python3
"""Reference t-comb labeling of the truncated binary tree onto a rooted
preorder, used to freeze expected labels in the constructions tests.

Scheme: the root of the tree is labeled by the frame root. A node labeled w
that sits n steps down a left spine (n = 0 at the node where w was first
introduced) has its left child labeled w (spine grows) and its right child
labeled theta_w(n), starting a fresh spine. theta_w is the cyclic enumeration
of R(w) in increasing world order.
"""


def tcomb(n_worlds, rel, depth, root):
    R = {w: sorted(v for v in range(n_worlds) if (w, v) in rel) for w in range(n_worlds)}

    def theta(w, k):
        return R[w][k % len(R[w])]

    labels = {(): (root, 0)}  # node (tuple of bits) -> (label, spine position)
    nodes = [()]
    for d in range(depth):
        new = []
        for a in nodes:
            if len(a) != d:
                continue
            w, n = labels[a]
            labels[a + (0,)] = (w, n + 1)
            labels[a + (1,)] = (theta(w, n), 0)
            new += [a + (0,), a + (1,)]
        nodes += new
    return {a: lw[0] for a, lw in labels.items()}


def seqstr(a):
    return "".join(map(str, a)) or "e"


print("== 2-chain w=0 < v=1, depth 3 ==")
rel = {(0, 0), (0, 1), (1, 1)}
lab = tcomb(2, rel, 3, 0)
for a in sorted(lab, key=lambda s: (len(s), s)):
    print(seqstr(a), "->", lab[a])

print("\n== fork F_1 (r=0,m=1,w0=2), depth 8: image of labeling ==")
rel = {(0, 0), (0, 1), (0, 2), (1, 1), (2, 2)}
lab = tcomb(3, rel, 8, 0)
print("image:", sorted(set(lab.values())))
print("node count:", len(lab), "= 2^9-1 =", 2 ** 9 - 1)

print("\n== back-condition margin demo: 2-chain depth 6 ==")
rel = {(0, 0), (0, 1), (1, 1)}
lab = tcomb(2, rel, 6, 0)
R = {0: {0, 1}, 1: {1}}
worst = None
for a in lab:
    if len(a) > 6 - 2 - 1:  # checked region: depth <= d - |W| - 1
        continue
    for v in R[lab[a]]:
        # find a descendant labeled v
        found = min((len(b) for b in lab if b[:len(a)] == a and lab[b] == v),
                    default=None)
        assert found is not None, (a, v)
        worst = max(worst or 0, found - len(a))
print("back condition holds everywhere in checked region; max witness distance:", worst)
