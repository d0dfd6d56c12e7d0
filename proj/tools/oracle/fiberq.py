import itertools

def tree(d):
    seqs=[()]
    frontier=[()]
    for _ in range(d):
        nf=[]
        for s in frontier:
            for b in (0,1):
                nf.append(s+(b,))
        seqs+=nf; frontier=nf
    idx={s:i for i,s in enumerate(seqs)}
    n=len(seqs)
    rel=[set() for _ in range(n)]
    for i,s in enumerate(seqs):
        for j,t in enumerate(seqs):
            if t[:len(s)]==s: rel[i].add(j)
    return seqs,idx,rel

def comb(seqs,idx,rel_t,R,root,d):
    # R: dict w->sorted successor list
    lab={():root}; spine={():0}
    for s in seqs:
        if len(s)==d: continue
        w=lab[s]; n=spine[s]
        lab[s+(0,)]=w; spine[s+(0,)]=n+1
        cyc=R[w]
        lab[s+(1,)]=cyc[n%len(cyc)]; spine[s+(1,)]=0
    return [lab[s] for s in seqs]

def quotient(seqs,idx,rel,labels,W,cluster):
    N=len(seqs)
    fiber={w:set(i for i in range(N) if labels[i]==w) for w in cluster}
    rep=[]; fc={}; point=[None]*N
    for v in range(N):
        w=labels[v]
        if w in cluster:
            if w not in fc: fc[w]=len(rep); rep.append(v)
            point[v]=fc[w]
        else:
            point[v]=len(rep); rep.append(v)
    Q=len(rep)
    classes=[set() for _ in range(Q)]
    for v in range(N): classes[point[v]].add(v)
    least=[]
    for q in range(Q):
        s=set(classes[q])
        while True:
            g=set(s)
            for v in s: g|=rel[v]
            for w in cluster:
                if fiber[w]&g: g|=fiber[w]
            if g==s: break
            s=g
        least.append(s)
    RQ=[set(b for b in range(Q) if rep[b] in least[a]) for a in range(Q)]
    # rho forth/back on orders
    forth=back=None
    for v in range(N):
        for vp in rel[v]:
            if point[vp] not in RQ[point[v]]: forth=(v,vp); break
        if forth: break
    for v in range(N):
        for qp in RQ[point[v]]:
            if not any(point[vp]==qp for vp in rel[v]): back=(v,qp); break
        if back: break
    return Q,point,rep,RQ,forth,back,fiber,[labels[r] for r in rep]

# case 1: fork F1, cluster {2}, depth 5
seqs,idx,rel=tree(5)
R={0:[0,1,2],1:[1],2:[2]}
labels=comb(seqs,idx,rel,R,0,5)
Q,point,rep,RQ,forth,back,fiber,clab=quotient(seqs,idx,rel,labels,3,{2})
print("fork d=5: N=%d Q=%d forth=%s back=%s"%(len(seqs),Q,forth,back))
print("  label counts:", {w:labels.count(w) for w in range(3)})

# field pullback: quotient field gens X_A; generate fields with closure c(S)=R^-1 S
def closure(rel,S,N):
    return set(v for v in range(N) if rel[v]&S)
def gen_field(N,rel,gens):
    mem={frozenset(),frozenset(range(N))}
    for g in gens: mem.add(frozenset(g))
    changed=True
    while changed:
        changed=False
        cur=list(mem)
        for a in cur:
            for s in (frozenset(range(N))-a, frozenset(closure(rel,set(a),N))):
                if s not in mem: mem.add(s); changed=True
            for b in cur:
                s=a&b
                if s not in mem: mem.add(s); changed=True
        if len(mem)>70000: raise RuntimeError("cap")
    return mem

N=len(seqs)
src_gens=[set(v for v in range(N) if (mask>>labels[v])&1) for mask in range(8)]
q_gens=[set(q for q in range(Q) if (mask>>clab[q])&1) for mask in range(8)]
srcf=gen_field(N,rel,src_gens)
qf=gen_field(Q,RQ,q_gens)
pull_ok=True
for A in qf:
    pre=frozenset(v for v in range(N) if point[v] in A)
    if pre not in srcf: pull_ok=False; bad=A; break
print("  src field size", len(srcf), "quotient field size", len(qf), "pullback ok:", pull_ok)

# case 2: total 2-cluster, cluster {0,1}, depth 4
seqs,idx,rel=tree(4)
R={0:[0,1],1:[0,1]}
labels=comb(seqs,idx,rel,R,0,4)
Q,point,rep,RQ,forth,back,fiber,clab=quotient(seqs,idx,rel,labels,2,{0,1})
print("2-cluster d=4: N=%d Q=%d forth=%s back=%s RQ=%s"%(len(seqs),Q,forth,back,RQ))

# F+ embedding at the truncation: closure of X_A in the quotient vs the
# image of the target closure of A. Fails first at the m-label mask.
seqs, idx, rel = tree(5)
R = {0: [0, 1, 2], 1: [1], 2: [2]}
labels = comb(seqs, idx, rel, R, 0, 5)
Q, point, rep, RQ, forth, back, fiber, clab = quotient(
    seqs, idx, rel, labels, 3, {2})
for mask in range(8):
    A = set(w for w in range(3) if (mask >> w) & 1)
    XA = set(q for q in range(Q) if clab[q] in A)
    cF = set(w for w in range(3) if set(R[w]) & A)
    want = set(q for q in range(Q) if clab[q] in cF)
    got = set(a for a in range(Q) if RQ[a] & XA)
    if got != want:
        print("closure tracking fails first at mask", mask,
              "(got %d classes, want %d)" % (len(got), len(want)))
        break
else:
    print("closure tracking holds for all masks")
