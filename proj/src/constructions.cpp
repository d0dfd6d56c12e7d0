// ==== constructions.cpp — tree labelings, interval nests, selection, quotients ====

#include "topos4/constructions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include <boost/multiprecision/cpp_int.hpp>

namespace topos4 {

namespace {

std::string nm(size_t v) { return std::to_string(v); }

std::string seq_string(const std::vector<uint8_t>& seq) {
    if (seq.empty()) return "e";
    std::string s;
    s.reserve(seq.size());
    for (uint8_t b : seq) s += char('0' + b);
    return s;
}

// Per-node sets of target worlds appearing in the subtree rooted there.
// Children carry larger BFS indices, so one reverse pass suffices.
std::vector<Subset> subtree_labels(const TruncatedTree& tree,
                                   const std::vector<size_t>& labels,
                                   size_t range) {
    const size_t n = tree.frame.n;
    std::vector<Subset> seen(n, Subset(range));
    for (size_t node = n; node-- > 0;) {
        seen[node].set(labels[node]);
        for (size_t c : tree.children(node)) seen[node] |= seen[c];
    }
    return seen;
}

}  // namespace

// ── Comb labelings ──

EnumerationFamily default_enumeration(const FiniteFrame& f) {
    EnumerationFamily e;
    e.theta.reserve(f.n);
    for (size_t w = 0; w < f.n; ++w) e.theta.push_back(elements(f.rel[w]));
    return e;
}

static void validate_enumeration(const FiniteFrame& f,
                                 const EnumerationFamily& th) {
    if (th.theta.size() != f.n)
        throw PreconditionError("enumeration must list a cycle for each of the " +
                                nm(f.n) + " worlds");
    for (size_t w = 0; w < f.n; ++w) {
        std::vector<size_t> cycle = th.theta[w];
        std::sort(cycle.begin(), cycle.end());
        if (cycle != elements(f.rel[w]))
            throw PreconditionError("enumeration cycle for world " + nm(w) +
                                    " must list each successor exactly once");
    }
}

LabeledMap tcomb_labeling(const FiniteFrame& f, const EnumerationFamily& theta,
                          size_t d) {
    require_s4(f, "tcomb_labeling");
    if (d == 0) throw PreconditionError("tcomb_labeling needs depth >= 1");
    std::vector<size_t> rts = roots(f);
    if (rts.empty())
        throw PreconditionError("tcomb_labeling needs a rooted frame");
    validate_enumeration(f, theta);

    LabeledMap m;
    m.tree = truncated_tree(2, d);
    m.target = f;
    m.theta = theta;
    m.labels.assign(m.tree.frame.n, 0);

    // spine[v] = how many consecutive left steps led to v
    std::vector<size_t> spine(m.tree.frame.n, 0);
    m.labels[0] = rts.front();
    for (size_t node = 0; node < m.tree.frame.n; ++node) {
        if (m.tree.is_limit(node)) continue;
        size_t w = m.labels[node];
        const std::vector<size_t>& cyc = theta.theta[w];
        size_t left = m.tree.child(node, 0);
        size_t right = m.tree.child(node, 1);
        m.labels[left] = w;
        spine[left] = spine[node] + 1;
        m.labels[right] = cyc[spine[node] % cyc.size()];
        spine[right] = 0;
    }
    return m;
}

LabeledMap tcomb_labeling(const FiniteFrame& f, size_t d) {
    return tcomb_labeling(f, default_enumeration(f), d);
}

CombReport verify_comb_pmorphism(const LabeledMap& m) {
    CombReport rep;
    const FiniteFrame& F = m.target;
    const TruncatedTree& T = m.tree;
    rep.margin = long(T.depth) - long(F.n) - 1;

    // forth on every tree edge; the tree order is the transitive closure
    for (size_t node = 0; node < T.frame.n; ++node) {
        for (size_t c : T.children(node)) {
            if (!F.related(m.labels[node], m.labels[c])) {
                rep.ok = false;
                rep.failed = "forth";
                rep.node = node;
                rep.world = c;
                rep.detail = "edge " + seq_string(T.seqs[node]) + " -> " +
                             seq_string(T.seqs[c]) + " maps to unrelated worlds " +
                             nm(m.labels[node]) + " -> " + nm(m.labels[c]);
                return rep;
            }
        }
    }

    // back inside the margin: every successor of the label appears below
    std::vector<Subset> seen = subtree_labels(T, m.labels, F.n);
    for (size_t node = 0; node < T.frame.n; ++node) {
        if (rep.margin < 0 || T.depth_of(node) > size_t(rep.margin)) continue;
        Subset missing = F.rel[m.labels[node]] - seen[node];
        if (missing.any()) {
            rep.ok = false;
            rep.failed = "back";
            rep.node = node;
            rep.world = missing.find_first();
            rep.detail = "node " + seq_string(T.seqs[node]) + " (label " +
                         nm(m.labels[node]) + ", depth " + nm(T.depth_of(node)) +
                         ") reaches no node labeled " + nm(rep.world);
            return rep;
        }
    }
    return rep;
}

// ── Binary tree onto the b-branching tree ──

CantorMap cantor_to_Lalpha(size_t b, size_t d) {
    if (b == 0) throw PreconditionError("cantor_to_Lalpha needs branching >= 1");
    if (d < 2) throw PreconditionError("cantor_to_Lalpha needs depth >= 2");

    // widest target depth e with node count (b^(e+1)-1)/(b-1) still < d
    auto node_count = [&](size_t e) -> size_t {
        size_t total = 0, level = 1;
        for (size_t i = 0; i <= e; ++i) {
            total += level;
            if (total > d) return total;  // beyond the budget, exact value moot
            level *= b;
        }
        return total;
    };
    size_t e = 0;
    if (b < d) {
        while (node_count(e + 1) <= d - 1) ++e;
    }

    CantorMap cm;
    cm.target = truncated_tree(b, e);
    cm.source = truncated_tree(2, d);

    // comb scheme with child cycles: the left child keeps the label, the
    // right child advances to the label's next target child (or stays
    // put on a target leaf), so b consecutive spine positions already
    // sweep all children of the label
    cm.labels.assign(cm.source.frame.n, 0);
    std::vector<size_t> spine(cm.source.frame.n, 0);
    for (size_t node = 0; node < cm.source.frame.n; ++node) {
        if (cm.source.is_limit(node)) continue;
        size_t w = cm.labels[node];
        size_t left = cm.source.child(node, 0);
        size_t right = cm.source.child(node, 1);
        cm.labels[left] = w;
        spine[left] = spine[node] + 1;
        std::vector<size_t> kids = cm.target.children(w);
        cm.labels[right] = kids.empty() ? w : kids[spine[node] % kids.size()];
        spine[right] = 0;
    }

    TreeMapReport& rep = cm.report;
    rep.literal_margin = long(d) - long(cm.target.frame.n);
    rep.children_margin = long(d) - long(b) - 1;

    std::vector<Subset> seen =
        subtree_labels(cm.source, cm.labels, cm.target.frame.n);
    for (size_t a = 0; a < cm.source.frame.n && rep.ok; ++a) {
        size_t fa = cm.labels[a];
        const Subset& up = cm.target.frame.rel[fa];
        if (!seen[a].is_subset_of(up)) {
            rep.subset_ok = rep.ok = false;
            Subset stray = seen[a] - up;
            rep.detail = "subtree of " + seq_string(cm.source.seqs[a]) +
                         " reaches target node " + nm(stray.find_first()) +
                         " outside the upset of its label " + nm(fa);
            break;
        }
        size_t depth_a = cm.source.depth_of(a);
        if (rep.literal_margin >= 0 && depth_a <= size_t(rep.literal_margin) &&
            seen[a] != up) {
            rep.literal_ok = rep.ok = false;
            Subset missing = up - seen[a];
            rep.detail = "subtree of " + seq_string(cm.source.seqs[a]) +
                         " misses target node " + nm(missing.find_first()) +
                         " of the upset of " + nm(fa);
            break;
        }
        if (rep.children_margin >= 0 && depth_a <= size_t(rep.children_margin)) {
            for (size_t c : cm.target.children(fa)) {
                if (!seen[a].test(c)) {
                    rep.children_ok = rep.ok = false;
                    rep.detail = "subtree of " + seq_string(cm.source.seqs[a]) +
                                 " misses child " + nm(c) + " of its label " +
                                 nm(fa);
                    break;
                }
            }
        }
    }
    return cm;
}

// ── Middle-thirds interval construction ──

std::string rational_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Runs the middle-thirds removal on [lo0, hi0] for levels 0..max_i,
// appending the removed middles to fam and the surviving closed
// intervals of every level to stages. Position indices are 1-based and
// left to right within each level.
static void carve(const Rational& lo0, const Rational& hi0, size_t max_i,
                  size_t host, std::vector<IntervalMember>& fam,
                  std::vector<ClosedStage>& stages) {
    std::vector<std::pair<Rational, Rational>> kept{{lo0, hi0}};
    for (size_t i = 0; i <= max_i; ++i) {
        std::vector<std::pair<Rational, Rational>> next;
        if (i < max_i) next.reserve(kept.size() * 2);
        unsigned long long j = 1;
        for (const auto& [lo, hi] : kept) {
            stages.push_back({i, j, lo, hi, host});
            Rational t = (hi - lo) / 3;
            fam.push_back({i, j, lo + t, hi - t, host,
                           uint8_t(j % 2 == 1 ? 1 : 0)});
            if (i < max_i) {
                next.emplace_back(lo, lo + t);
                next.emplace_back(hi - t, hi);
            }
            ++j;
        }
        kept = std::move(next);
    }
}

IntervalConstruction interval_construction(size_t n) {
    if (n > 5)
        throw ResourceCapError("interval construction capped at depth 5, got " +
                               nm(n));
    IntervalConstruction c;
    c.depth = n;
    c.families.resize(n + 1);
    c.cantor_stages.resize(n + 1);
    carve(Rational(0), Rational(1), n, SIZE_MAX, c.families[0],
          c.cantor_stages[0]);
    for (size_t k = 1; k <= n; ++k) {
        const std::vector<IntervalMember>& prev = c.families[k - 1];
        for (size_t idx = 0; idx < prev.size(); ++idx)
            carve(prev[idx].lo, prev[idx].hi, n - k, idx, c.families[k],
                  c.cantor_stages[k]);
    }
    return c;
}

std::vector<uint8_t> IntervalConstruction::label(size_t k, size_t idx) const {
    std::vector<uint8_t> bits;
    bits.reserve(k + 1);
    size_t fam = k;
    while (true) {
        const IntervalMember& m = families.at(fam).at(idx);
        bits.push_back(m.bit);
        if (m.host == SIZE_MAX) break;
        idx = m.host;
        --fam;
    }
    std::reverse(bits.begin(), bits.end());
    return bits;
}

namespace {

using BigRat = boost::multiprecision::cpp_rational;

// Membership in the Cantor set of [0, 1] by orbit of t -> 3t (left
// third), t -> 3t - 2 (right third); a middle-third visit rules the
// point out, a repeated value certifies membership.
bool in_cantor_unit(const BigRat& t0) {
    BigRat t = t0;
    std::set<BigRat> seen;
    while (seen.insert(t).second) {
        BigRat u = 3 * t;
        if (u <= 1) t = u;
        else if (u >= 2) t = u - 2;
        else return false;
    }
    return true;
}

}  // namespace

LabelChain label_of_point(const Rational& x, size_t k) {
    if (x < Rational(0) || x > Rational(1))
        throw PreconditionError("label_of_point needs x in [0, 1], got " +
                                rational_string(x));
    if (x.denominator() > 1000000)
        throw PreconditionError(
            "label_of_point caps denominators at 10^6 to bound orbit checks");

    LabelChain out;
    std::vector<uint8_t> cur;
    out.chain.push_back(cur);
    BigRat lo(0), hi(1);
    BigRat t(x.numerator(), x.denominator());
    for (size_t step = 0; step < k; ++step) {
        BigRat rel = (t - lo) / (hi - lo);
        if (in_cantor_unit(rel)) {
            out.stopped = true;
            break;
        }
        // descend the kept thirds until rel sits in a removed middle;
        // kept endpoints belong to the Cantor set, so ties cannot occur
        BigRat a(0), b(1);
        unsigned long long j = 1;
        while (true) {
            BigRat third = (b - a) / 3;
            if (rel < a + third) {
                b = a + third;
                j = 2 * j - 1;
            } else if (rel > b - third) {
                a = b - third;
                j = 2 * j;
            } else {
                a += third;
                b -= third;
                break;
            }
        }
        BigRat len = hi - lo;
        BigRat nlo = lo + len * a;
        hi = lo + len * b;
        lo = nlo;
        cur.push_back(uint8_t(j % 2 == 1 ? 1 : 0));
        out.chain.push_back(cur);
    }
    return out;
}

IntervalReport verify_interval_lemmas(const IntervalConstruction& c) {
    IntervalReport rep;
    rep.removed_total = Rational(0);
    for (const IntervalMember& m : c.families[0])
        rep.removed_total += m.hi - m.lo;

    // nested labels extend the host label by exactly the expected bits:
    // both parities below the last family, only the level-0 middle there
    for (size_t k = 0; k + 1 <= c.depth && rep.children_split_ok; ++k) {
        std::vector<uint8_t> seen_bits(c.families[k].size(), 0);
        for (const IntervalMember& m : c.families[k + 1])
            seen_bits[m.host] |= uint8_t(1 << m.bit);
        uint8_t want = (k + 1 < c.depth) ? 3 : 2;  // {0,1} or just bit 1
        for (size_t idx = 0; idx < seen_bits.size(); ++idx) {
            if (seen_bits[idx] != want) {
                rep.children_split_ok = rep.ok = false;
                rep.detail = "family " + nm(k) + " member " + nm(idx) +
                             " has child bit mask " + nm(seen_bits[idx]) +
                             ", expected " + nm(want);
                break;
            }
        }
    }

    // while k+1 <= depth every bit string of length k+1 appears
    for (size_t k = 0; k <= c.depth && rep.labels_complete_ok; ++k) {
        std::unordered_set<unsigned> labels;
        for (size_t idx = 0; idx < c.families[k].size(); ++idx) {
            std::vector<uint8_t> L = c.label(k, idx);
            unsigned packed = 1;  // leading 1 keeps the length
            for (uint8_t bit : L) packed = packed << 1 | bit;
            labels.insert(packed);
        }
        if (k + 1 <= c.depth && labels.size() != (size_t{1} << (k + 1))) {
            rep.labels_complete_ok = rep.ok = false;
            rep.detail = "family " + nm(k) + " carries " + nm(labels.size()) +
                         " distinct labels, expected " + nm(size_t{1} << (k + 1));
        }
    }

    // members of one family are pairwise disjoint open intervals
    for (size_t k = 0; k <= c.depth && rep.disjoint_ok; ++k) {
        std::vector<std::pair<Rational, Rational>> spans;
        spans.reserve(c.families[k].size());
        for (const IntervalMember& m : c.families[k])
            spans.emplace_back(m.lo, m.hi);
        std::sort(spans.begin(), spans.end());
        for (size_t i = 0; i + 1 < spans.size(); ++i) {
            if (spans[i].second > spans[i + 1].first) {
                rep.disjoint_ok = rep.ok = false;
                rep.detail = "family " + nm(k) + " members overlap near " +
                             rational_string(spans[i].second);
                break;
            }
        }
    }

    // lengths stay below 1/3^(k+1) and the bound is attained
    Rational bound(1, 3);
    for (size_t k = 0; k <= c.depth && rep.length_ok; ++k) {
        Rational longest(0);
        for (const IntervalMember& m : c.families[k]) {
            Rational len = m.hi - m.lo;
            if (len > bound) {
                rep.length_ok = rep.ok = false;
                rep.detail = "family " + nm(k) + " member of length " +
                             rational_string(len) + " exceeds " +
                             rational_string(bound);
                break;
            }
            longest = std::max(longest, len);
        }
        if (rep.length_ok && longest != bound) {
            rep.length_ok = rep.ok = false;
            rep.detail = "family " + nm(k) + " never attains length " +
                         rational_string(bound);
        }
        bound /= 3;
    }
    return rep;
}

// ── Witness selection ──

SelectionResult cgfp_select(FormulaArena& ar, const GeneralStructure& s,
                            FormulaId phi, const Valuation& val, size_t w,
                            const Subset& seed) {
    if (s.kind != BaseKind::Frame)
        throw PreconditionError("cgfp_select works on frame-based structures");
    const FiniteFrame& F = s.frame;
    const size_t n = F.n;
    if (w >= n)
        throw PreconditionError("cgfp_select world " + nm(w) +
                                " is out of range for carrier " + nm(n));
    if (seed.size() != n)
        throw PreconditionError("cgfp_select seed is over the wrong carrier");

    std::vector<FormulaId> subs = subformulas(ar, phi);
    std::map<FormulaId, Subset> value;
    for (FormulaId g : subs) value[g] = evaluate(ar, g, s.field, val);
    if (value.at(phi).test(w))
        throw PreconditionError("cgfp_select needs the formula refuted at world " +
                                nm(w));

    Subset kept = seed;
    kept.set(w);
    std::vector<WitnessChoice> log;
    while (true) {
        Subset add(n);
        for (size_t v = kept.find_first(); v != Subset::npos;
             v = kept.find_next(v)) {
            for (FormulaId g : subs) {
                FK k = ar.kind(g);
                size_t u;
                if (k == FK::Diamond && value.at(g).test(v)) {
                    u = (F.rel[v] & value.at(ar.child(g))).find_first();
                } else if (k == FK::Box && !value.at(g).test(v)) {
                    u = (F.rel[v] - value.at(ar.child(g))).find_first();
                } else {
                    continue;
                }
                if (!kept.test(u)) log.push_back({v, g, u});
                add.set(u);
            }
        }
        if (add.is_subset_of(kept)) break;
        kept |= add;
    }

    SelectionResult out;
    out.kept_worlds = elements(kept);
    out.witness_log = std::move(log);
    const size_t kn = out.kept_worlds.size();
    std::vector<size_t> idx_of(n, SIZE_MAX);
    for (size_t i = 0; i < kn; ++i) idx_of[out.kept_worlds[i]] = i;

    out.restricted_frame.n = kn;
    out.restricted_frame.rel.assign(kn, Subset(kn));
    for (size_t i = 0; i < kn; ++i)
        for (size_t j = 0; j < kn; ++j)
            if (F.related(out.kept_worlds[i], out.kept_worlds[j]))
                out.restricted_frame.rel[i].set(j);
    if (!F.labels.empty())
        for (size_t v : out.kept_worlds)
            out.restricted_frame.labels.push_back(F.labels[v]);

    auto restrict = [&](const Subset& a) {
        Subset r(kn);
        for (size_t i = 0; i < kn; ++i)
            if (a.test(out.kept_worlds[i])) r.set(i);
        return r;
    };

    std::vector<Subset> raws;
    for (FormulaId g : subs) raws.push_back(restrict(value.at(g)));
    std::sort(raws.begin(), raws.end());
    raws.erase(std::unique(raws.begin(), raws.end()), raws.end());
    out.raw_value_count = raws.size();
    out.restricted_field = field_generate(
        kn, ClosureOp::from_frame(out.restricted_frame), raws);
    out.field_enlarged = out.restricted_field.members != raws;

    Valuation rval;
    for (uint32_t letter : letters_of(ar, phi))
        rval[letter] = restrict(val.at(letter));
    for (FormulaId g : subs) {
        Subset got = evaluate(ar, g, out.restricted_field, rval);
        Subset want = restrict(value.at(g));
        if (got != want) {
            Subset diff = got ^ want;
            size_t i = diff.find_first();
            throw VerificationError(
                "witness selection broke the truth lemma: " + print(ar, g) +
                " changed value at kept world " + nm(out.kept_worlds[i]));
        }
    }
    return out;
}

// ── Cluster quotients ──

CollapseResult cluster_collapse(FormulaArena& ar, const FiniteFrame& cluster,
                                FormulaId phi, const Valuation& val) {
    require_s4(cluster, "cluster_collapse");
    if (clusters(cluster).size() != 1)
        throw PreconditionError("cluster_collapse needs a single-cluster frame");

    SetField pw = powerset_field(cluster);
    std::vector<FormulaId> subs = subformulas(ar, phi);
    std::map<FormulaId, Subset> value;
    for (FormulaId g : subs) value[g] = evaluate(ar, g, pw, val);

    // worlds agreeing on every subformula fall into one block; scanning
    // worlds in order keeps block least elements ascending
    std::map<std::vector<bool>, size_t> block_index;
    std::vector<std::vector<size_t>> blocks;
    std::vector<size_t> block_of(cluster.n);
    for (size_t v = 0; v < cluster.n; ++v) {
        std::vector<bool> sig;
        sig.reserve(subs.size());
        for (FormulaId g : subs) sig.push_back(value.at(g).test(v));
        auto [it, fresh] = block_index.try_emplace(sig, blocks.size());
        if (fresh) blocks.emplace_back();
        blocks[it->second].push_back(v);
        block_of[v] = it->second;
    }

    QuotientResult q = quotient(cluster, blocks);
    CollapseResult out;
    out.quotient = q.frame;
    out.block_of = q.block_of;
    for (uint32_t letter : letters_of(ar, phi)) {
        Subset bs(blocks.size());
        for (size_t b = 0; b < blocks.size(); ++b)
            if (val.at(letter).test(blocks[b].front())) bs.set(b);
        out.pushed[letter] = bs;
    }
    out.projection = check_p_morphism(cluster, q.frame, q.block_of);

    SetField qpw = powerset_field(q.frame);
    for (FormulaId g : subs) {
        Subset after = evaluate(ar, g, qpw, out.pushed);
        for (size_t v = 0; v < cluster.n; ++v) {
            if (value.at(g).test(v) != after.test(block_of[v]))
                throw VerificationError(
                    "cluster collapse changed the value of " + print(ar, g) +
                    " at world " + nm(v));
        }
    }
    return out;
}

ClusterQuotient quotient_by_cluster_fibers(const LabeledMap& m,
                                           const std::vector<size_t>& cluster) {
    const FiniteFrame& F = m.target;
    require_s4(F, "quotient_by_cluster_fibers");
    if (F.n > 8)
        throw ResourceCapError(
            "cluster fiber quotient capped at 8 target worlds, got " + nm(F.n));

    std::vector<size_t> cs = cluster;
    std::sort(cs.begin(), cs.end());
    bool maximal = false;
    for (std::vector<size_t> mc : maximal_clusters(F)) {
        std::sort(mc.begin(), mc.end());
        if (mc == cs) maximal = true;
    }
    if (!maximal)
        throw PreconditionError(
            "quotient_by_cluster_fibers needs a maximal cluster of the target");

    const TruncatedTree& T = m.tree;
    const size_t N = T.frame.n;
    Subset in_cluster(F.n);
    for (size_t w : cs) in_cluster.set(w);
    std::vector<Subset> fiber(F.n, Subset(N));
    for (size_t v = 0; v < N; ++v)
        if (in_cluster.test(m.labels[v])) fiber[m.labels[v]].set(v);

    // classes: whole label fibers over the cluster, singletons elsewhere
    ClusterQuotient out;
    out.point_of.assign(N, SIZE_MAX);
    std::vector<size_t> rep_node;     // class -> least member
    std::vector<size_t> fiber_class(F.n, SIZE_MAX);
    for (size_t v = 0; v < N; ++v) {
        size_t w = m.labels[v];
        if (in_cluster.test(w)) {
            if (fiber_class[w] == SIZE_MAX) {
                fiber_class[w] = rep_node.size();
                rep_node.push_back(v);
            }
            out.point_of[v] = fiber_class[w];
        } else {
            out.point_of[v] = rep_node.size();
            rep_node.push_back(v);
        }
    }
    const size_t Q = rep_node.size();

    // least saturated upset over each class: up-close along the tree
    // order, absorb touched fibers, repeat to a fixpoint
    std::vector<Subset> class_nodes(Q, Subset(N));
    for (size_t v = 0; v < N; ++v) class_nodes[out.point_of[v]].set(v);
    std::vector<Subset> least(Q);
    for (size_t q = 0; q < Q; ++q) {
        Subset s = class_nodes[q];
        while (true) {
            Subset grown = s;
            for (size_t v = s.find_first(); v != Subset::npos;
                 v = s.find_next(v))
                grown |= T.frame.rel[v];
            for (size_t w : cs)
                if ((fiber[w] & grown).any()) grown |= fiber[w];
            if (grown == s) break;
            s = std::move(grown);
        }
        least[q] = std::move(s);
    }

    FiniteFrame rq;
    rq.n = Q;
    rq.rel.assign(Q, Subset(Q));
    for (size_t a = 0; a < Q; ++a)
        for (size_t b = 0; b < Q; ++b)
            if (least[a].test(rep_node[b])) rq.rel[a].set(b);
    if (!check_s4(rq).ok)
        throw VerificationError("cluster fiber quotient order lost S4");

    // source field: generated by the label preimages of all target sets
    std::vector<Subset> src_gens, q_gens;
    std::vector<size_t> class_label(Q);
    for (size_t q = 0; q < Q; ++q) class_label[q] = m.labels[rep_node[q]];
    for (size_t mask = 0; mask < (size_t{1} << F.n); ++mask) {
        Subset pre(N), img(Q);
        for (size_t v = 0; v < N; ++v)
            if (mask >> m.labels[v] & 1) pre.set(v);
        for (size_t q = 0; q < Q; ++q)
            if (mask >> class_label[q] & 1) img.set(q);
        src_gens.push_back(pre);
        q_gens.push_back(img);
    }
    GeneralStructure source;
    source.kind = BaseKind::Frame;
    source.frame = T.frame;
    source.field =
        field_generate(N, ClosureOp::from_frame(T.frame), src_gens);
    out.space.kind = BaseKind::Frame;
    out.space.frame = rq;
    out.space.field = field_generate(Q, ClosureOp::from_frame(rq), q_gens);

    out.rho = check_interior_map(out.point_of, source, out.space);

    // the target's powerset should land injectively in the quotient
    // field, with closures tracking the target closure
    out.field_embeds = true;
    std::map<Subset, size_t> seen_images;
    for (size_t mask = 0; mask < (size_t{1} << F.n) && out.field_embeds;
         ++mask) {
        auto [it, fresh] = seen_images.try_emplace(q_gens[mask], mask);
        if (!fresh) {
            out.field_embeds = false;
            out.field_detail =
                "target sets " + nm(it->second) + " and " + nm(mask) +
                " (as masks) share the image " + set_to_string(q_gens[mask]);
            break;
        }
        Subset a(F.n);
        for (size_t w = 0; w < F.n; ++w)
            if (mask >> w & 1) a.set(w);
        Subset closed = preimage(F, a);
        Subset want(Q);
        for (size_t q = 0; q < Q; ++q)
            if (closed.test(class_label[q])) want.set(q);
        if (out.space.field.closure.close(q_gens[mask]) != want) {
            out.field_embeds = false;
            out.field_detail = "closure of target set " + set_to_string(a) +
                               " does not track the quotient closure";
        }
    }
    return out;
}

// ── Gluing pipeline ──

PipelineResult pipeline_not_s42(
    const std::vector<std::pair<FiniteFrame, std::vector<size_t>>>& parts) {
    if (parts.empty())
        throw PreconditionError("pipeline_not_s42 needs at least one part");

    PipelineResult out;
    std::vector<GeneralStructure> hs;
    std::vector<size_t> tips;  // index of the fork's terminal point in H_n
    for (const auto& [g, cluster] : parts) {
        require_s4(g, "pipeline_not_s42");
        if (roots(g).empty())
            throw PreconditionError("pipeline_not_s42 parts must be rooted");
        std::vector<size_t> cs = cluster;
        std::sort(cs.begin(), cs.end());
        bool maximal = false;
        for (std::vector<size_t> mc : maximal_clusters(g)) {
            std::sort(mc.begin(), mc.end());
            if (mc == cs) maximal = true;
        }
        if (!maximal)
            throw PreconditionError(
                "pipeline_not_s42 needs a maximal cluster of each part");

        size_t alpha = cs.size();
        GluingSpec spec;
        spec.shared = general_frame_powerset(make_cluster(alpha));
        spec.parts = {general_frame_powerset(g),
                      general_frame_powerset(make_fork(alpha))};
        std::vector<size_t> into_fork;
        for (size_t k = 0; k < alpha; ++k) into_fork.push_back(k + 2);
        spec.embeddings = {cs, into_fork};
        GluingResult h = glue(spec);
        hs.push_back(h.glued);
        tips.push_back(h.projections[1][1]);
        out.h_frames.push_back(h.glued.frame);
    }

    GluingSpec fin;
    fin.shared = general_frame_powerset(make_frame(1, {{0, 0}}));
    fin.parts = hs;
    for (size_t t : tips) fin.embeddings.push_back({t});
    GluingResult g = glue(fin);
    out.glued = g.glued;
    out.h_world_maps = g.projections;

    // each intermediate frame must land on an up-closed subframe with
    // its relation intact, so refutations carry over
    for (size_t i = 0; i < hs.size(); ++i) {
        const FiniteFrame& h = hs[i].frame;
        Subset image(out.glued.frame.n);
        for (size_t v : g.projections[i]) image.set(v);
        if (!is_upset(out.glued.frame, image))
            throw VerificationError("pipeline part " + nm(i) +
                                    " does not land on an upset");
        for (size_t a = 0; a < h.n; ++a)
            for (size_t b = 0; b < h.n; ++b)
                if (h.related(a, b) != out.glued.frame.related(
                                           g.projections[i][a],
                                           g.projections[i][b]))
                    throw VerificationError("pipeline part " + nm(i) +
                                            " lost its relation in the glue");
    }
    if (!is_connected_frame(out.glued.frame))
        throw VerificationError("pipeline result is not connected");
    if (parts.size() >= 2 && !roots(out.glued.frame).empty())
        throw VerificationError("pipeline result kept a root");
    return out;
}

// ── Staged rational labeling ──

QStageResult q_stage(const FiniteFrame& f, size_t k) {
    require_s4(f, "q_stage");
    std::vector<size_t> rts = roots(f);
    if (rts.empty()) throw PreconditionError("q_stage needs a rooted frame");
    if (k == 0) throw PreconditionError("q_stage needs at least one stage");
    if (k > 8)
        throw ResourceCapError("q_stage capped at 8 stages, got " + nm(k));

    struct Entry {
        size_t label, born, cursor;
        Subset flanks;
    };
    std::map<Rational, Entry> pts;
    pts.emplace(Rational(1, 2), Entry{rts.front(), 0, 0, Subset(f.n)});

    for (size_t s = 1; s <= k; ++s) {
        Rational eps(1, 2 * (1LL << (2 * s)));  // 1 / (2 * 4^s)
        std::vector<Rational> older;
        for (const auto& [x, e] : pts)
            if (e.born < s) older.push_back(x);
        for (const Rational& x : older) {
            Entry& e = pts.at(x);
            std::vector<size_t> succ = elements(f.rel[e.label]);
            for (int side = 0; side < 2; ++side) {
                Rational y = side == 0 ? x - eps : x + eps;
                size_t lab = succ[(e.cursor + size_t(side)) % succ.size()];
                if (y <= Rational(0) || y >= Rational(1) || pts.count(y))
                    throw VerificationError("stage " + nm(s) +
                                            " flank collided at " +
                                            rational_string(y));
                pts.emplace(y, Entry{lab, s, 0, Subset(f.n)});
                e.flanks.set(lab);
            }
            e.cursor = (e.cursor + 2) % succ.size();
        }
    }

    QStageResult out;
    out.stages = k;
    for (const auto& [x, e] : pts) {
        out.points.push_back({x, e.label, e.born, e.flanks});
        Subset covered = e.flanks;
        covered.set(e.label);  // a point witnesses its own label
        if (!f.rel[e.label].is_subset_of(covered)) {
            ++out.uncovered;
            if (e.born != k) out.uncovered_only_last_stage = false;
        }
    }
    return out;
}

// ── Serialization ──

nlohmann::json labeled_map_to_json(const LabeledMap& m) {
    nlohmann::json nodes = nlohmann::json::array();
    nlohmann::json labels = nlohmann::json::object();
    for (size_t v = 0; v < m.tree.frame.n; ++v) {
        std::string s = seq_string(m.tree.seqs[v]);
        nodes.push_back(s);
        labels[s] = m.labels[v];
    }
    return {{"nodes", nodes}, {"labels", labels}};
}

nlohmann::json interval_to_json(const IntervalConstruction& c) {
    nlohmann::json families = nlohmann::json::array();
    for (size_t k = 0; k < c.families.size(); ++k) {
        nlohmann::json fam = nlohmann::json::array();
        for (size_t idx = 0; idx < c.families[k].size(); ++idx) {
            const IntervalMember& m = c.families[k][idx];
            std::string bits;
            for (uint8_t b : c.label(k, idx)) bits += char('0' + b);
            nlohmann::json j = {{"level", m.level},   {"pos", m.pos},
                                {"lo", rational_string(m.lo)},
                                {"hi", rational_string(m.hi)},
                                {"label", bits}};
            j["host"] = m.host == SIZE_MAX ? nlohmann::json()
                                           : nlohmann::json(m.host);
            fam.push_back(std::move(j));
        }
        families.push_back(std::move(fam));
    }
    nlohmann::json stages = nlohmann::json::array();
    for (const std::vector<ClosedStage>& sk : c.cantor_stages) {
        nlohmann::json level = nlohmann::json::array();
        for (const ClosedStage& st : sk) {
            nlohmann::json j = {{"level", st.level},
                                {"pos", st.pos},
                                {"lo", rational_string(st.lo)},
                                {"hi", rational_string(st.hi)}};
            j["host"] = st.host == SIZE_MAX ? nlohmann::json()
                                            : nlohmann::json(st.host);
            level.push_back(std::move(j));
        }
        stages.push_back(std::move(level));
    }
    return {{"depth", c.depth},
            {"families", std::move(families)},
            {"cantor_stages", std::move(stages)}};
}

}  // namespace topos4
