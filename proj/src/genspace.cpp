// ==== genspace.cpp — finite topologies, general frames and spaces ====

#include "topos4/genspace.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace topos4 {

namespace {

std::string nm(size_t v) { return std::to_string(v); }

// Members and opens share one canonical order: the numeric bitset order
// used throughout the field code, so families compare with ==.
void canonicalize(std::vector<Subset>& fam) {
    std::sort(fam.begin(), fam.end());
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
}

bool family_contains(const std::vector<Subset>& fam, const Subset& a) {
    return std::binary_search(fam.begin(), fam.end(), a);
}

// Copy of a part-local set into the sum carrier at the given offset.
Subset shift_into(const Subset& a, size_t offset, size_t total) {
    Subset out(total);
    for (size_t i = a.find_first(); i != Subset::npos; i = a.find_next(i)) {
        out.set(offset + i);
    }
    return out;
}

// Singleton-closure rows of a topology; finite topological closure is
// additive, so the rows determine the whole operator.
ClosureOp rows_of(const FiniteTopology& t) {
    std::vector<Subset> rows;
    rows.reserve(t.n);
    for (size_t y = 0; y < t.n; ++y) {
        rows.push_back(t.closure(make_set(t.n, {y})));
    }
    return ClosureOp::from_rows(std::move(rows));
}

// Validates that members form a field of sets closed under the closure
// operator, then attaches the operator. Rejects oversized inputs rather
// than spending quadratic time on them.
SetField checked_field(size_t n, const ClosureOp& op,
                       std::vector<Subset> members, const std::string& who) {
    for (const Subset& m : members) {
        if (m.size() != n) {
            throw PreconditionError(who + ": member defined over the wrong carrier");
        }
    }
    canonicalize(members);
    if (members.size() > (size_t{1} << 12)) {
        throw ResourceCapError(who + ": field validation capped at 4096 members");
    }
    SetField field{n, std::move(members), op};
    if (!field.contains(empty_set(n)) || !field.contains(full_set(n))) {
        throw PreconditionError(who +
                                ": field must contain the empty set and the carrier");
    }
    for (const Subset& m : field.members) {
        if (!field.contains(~m)) {
            throw PreconditionError(who + ": field not closed under complement at " +
                                    set_to_string(m));
        }
        if (!field.contains(op.close(m))) {
            throw PreconditionError(who + ": field not closed under closure at " +
                                    set_to_string(m));
        }
        for (const Subset& k : field.members) {
            if (!field.contains(m & k)) {
                throw PreconditionError(who + ": field not closed under intersection of " +
                                        set_to_string(m) + " and " + set_to_string(k));
            }
        }
    }
    return field;
}

}  // namespace

// ── Finite topologies ──

bool FiniteTopology::is_open(const Subset& a) const {
    return family_contains(opens, a);
}

Subset FiniteTopology::interior(const Subset& a) const {
    Subset out(n);
    for (const Subset& o : opens) {
        if ((o & ~a).none()) out |= o;
    }
    return out;
}

Subset FiniteTopology::closure(const Subset& a) const {
    return ~interior(~a);
}

bool operator==(const FiniteTopology& a, const FiniteTopology& b) {
    return a.n == b.n && a.opens == b.opens;
}

FiniteTopology topology_from_opens(size_t n, std::vector<Subset> opens) {
    for (const Subset& o : opens) {
        if (o.size() != n) {
            throw PreconditionError("open defined over the wrong carrier");
        }
    }
    canonicalize(opens);
    if (opens.size() > (size_t{1} << 16)) {
        throw ResourceCapError("topology capped at 65536 opens");
    }
    FiniteTopology t{n, std::move(opens)};
    if (!t.is_open(empty_set(n)) || !t.is_open(full_set(n))) {
        throw PreconditionError(
            "opens must include the empty set and the carrier");
    }
    for (const Subset& a : t.opens) {
        for (const Subset& b : t.opens) {
            if (!t.is_open(a | b)) {
                throw PreconditionError("opens not closed under union of " +
                                        set_to_string(a) + " and " +
                                        set_to_string(b));
            }
            if (!t.is_open(a & b)) {
                throw PreconditionError("opens not closed under intersection of " +
                                        set_to_string(a) + " and " +
                                        set_to_string(b));
            }
        }
    }
    return t;
}

FiniteTopology discrete_topology(size_t n) {
    if (n > 16) {
        throw ResourceCapError("discrete topology capped at carrier 16");
    }
    std::vector<Subset> opens;
    opens.reserve(size_t{1} << n);
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        opens.push_back(Subset(n, mask));
    }
    return FiniteTopology{n, std::move(opens)};
}

FiniteTopology indiscrete_topology(size_t n) {
    std::vector<Subset> opens{empty_set(n), full_set(n)};
    canonicalize(opens);
    return FiniteTopology{n, std::move(opens)};
}

FiniteFrame specialization_order(const FiniteTopology& t) {
    FiniteFrame f;
    f.n = t.n;
    f.rel.assign(t.n, Subset(t.n));
    for (size_t y = 0; y < t.n; ++y) {
        Subset below = t.closure(make_set(t.n, {y}));
        for (size_t x = below.find_first(); x != Subset::npos;
             x = below.find_next(x)) {
            f.rel[x].set(y);
        }
    }
    return f;
}

FiniteTopology alexandroff_topology(const FiniteFrame& f) {
    require_s4(f, "alexandroff_topology");
    if (f.n > 16) {
        throw ResourceCapError("alexandroff_topology capped at carrier 16");
    }
    std::vector<Subset> opens;
    for (size_t mask = 0; mask < (size_t{1} << f.n); ++mask) {
        Subset a(f.n, mask);
        if (is_upset(f, a)) opens.push_back(std::move(a));
    }
    return FiniteTopology{f.n, std::move(opens)};
}

// ── General structures ──

GeneralStructure make_general_frame(const FiniteFrame& f,
                                    const std::vector<Subset>& members) {
    require_s4(f, "make_general_frame");
    SetField field =
        checked_field(f.n, ClosureOp::from_frame(f), members, "make_general_frame");
    return GeneralStructure{BaseKind::Frame, f, FiniteTopology{}, std::move(field)};
}

GeneralStructure make_general_space(const FiniteTopology& t,
                                    const std::vector<Subset>& members) {
    SetField field = checked_field(t.n, rows_of(t), members, "make_general_space");
    return GeneralStructure{BaseKind::Space, FiniteFrame{}, t, std::move(field)};
}

GeneralStructure general_frame_powerset(const FiniteFrame& f) {
    require_s4(f, "general_frame_powerset");
    return GeneralStructure{BaseKind::Frame, f, FiniteTopology{},
                            powerset_field(f)};
}

GeneralStructure general_space_powerset(const FiniteTopology& t) {
    if (t.n > 16) {
        throw ResourceCapError("powerset field capped at carrier 16");
    }
    std::vector<Subset> members;
    members.reserve(size_t{1} << t.n);
    for (size_t mask = 0; mask < (size_t{1} << t.n); ++mask) {
        members.push_back(Subset(t.n, mask));
    }
    return GeneralStructure{BaseKind::Space, FiniteFrame{}, t,
                            SetField{t.n, std::move(members), rows_of(t)}};
}

DescriptiveReport check_descriptive(const GeneralStructure& s) {
    const size_t n = s.carrier();
    const SetField& field = s.field;
    DescriptiveReport rep;

    // Differentiated: some member holds exactly one of each point pair.
    for (size_t w = 0; w < n && rep.differentiated; ++w) {
        for (size_t v = w + 1; v < n && rep.differentiated; ++v) {
            bool separated = false;
            for (const Subset& m : field.members) {
                if (m.test(w) != m.test(v)) {
                    separated = true;
                    break;
                }
            }
            if (!separated) {
                rep.differentiated = false;
                rep.diff_w = w;
                rep.diff_v = v;
            }
        }
    }

    // Compact: run the finite intersection property on the closed
    // members. The carrier is finite, so any family with empty total
    // intersection is itself the finite subfamily that witnesses it;
    // the condition cannot fail.
    std::vector<Subset> closed;
    for (const Subset& m : field.members) {
        if (field.closure.close(m) == m) closed.push_back(m);
    }
    Subset total = full_set(n);
    size_t used = 0;
    for (const Subset& c : closed) {
        total &= c;
        ++used;
        if (total.none()) break;
    }
    rep.compact = true;
    if (total.none()) {
        rep.compact_note =
            "vacuously compact: the closed members already intersect to the "
            "empty set within " +
            nm(used) + " sets, a finite subfamily of itself";
    } else {
        rep.compact_note =
            "vacuously compact: every family of closed members over a finite "
            "carrier is a finite subfamily of itself";
    }

    // Tight: frames use the inverse-image separation condition, spaces
    // ask the open members to form a basis.
    if (s.kind == BaseKind::Frame) {
        for (size_t w = 0; w < n && rep.tight; ++w) {
            for (size_t v = 0; v < n && rep.tight; ++v) {
                if (s.frame.related(w, v)) continue;
                bool witnessed = false;
                for (const Subset& m : field.members) {
                    if (m.test(v) && !field.closure.close(m).test(w)) {
                        witnessed = true;
                        break;
                    }
                }
                if (!witnessed) {
                    rep.tight = false;
                    rep.tight_detail =
                        "world " + nm(w) + " does not see world " + nm(v) +
                        ", yet every member containing " + nm(v) +
                        " has " + nm(w) + " in its closure";
                }
            }
        }
    } else {
        std::vector<Subset> open_members;
        for (const Subset& m : field.members) {
            if (s.space.is_open(m)) open_members.push_back(m);
        }
        for (const Subset& o : s.space.opens) {
            Subset covered(n);
            for (const Subset& m : open_members) {
                if ((m & ~o).none()) covered |= m;
            }
            if (covered != o) {
                rep.tight = false;
                size_t missing = (o & ~covered).find_first();
                rep.tight_detail = "open " + set_to_string(o) +
                                   " is not a union of open members: point " +
                                   nm(missing) + " stays uncovered";
                break;
            }
        }
    }
    return rep;
}

GeneralStructure to_frame(const GeneralStructure& s) {
    if (s.kind != BaseKind::Space) {
        throw PreconditionError("to_frame expects a space-based structure");
    }
    DescriptiveReport rep = check_descriptive(s);
    if (!rep.compact || !rep.tight) {
        throw PreconditionError("to_frame requires a compact and tight input: " +
                                (rep.tight ? std::string("compactness failed")
                                           : rep.tight_detail));
    }
    FiniteFrame fr = specialization_order(s.space);
    ClosureOp op = ClosureOp::from_frame(fr);
    for (const Subset& m : s.field.members) {
        if (s.space.closure(m) != op.close(m)) {
            throw VerificationError(
                "to_frame: topological and relational closure disagree at " +
                set_to_string(m));
        }
    }
    return GeneralStructure{BaseKind::Frame, std::move(fr), FiniteTopology{},
                            SetField{s.field.n, s.field.members, std::move(op)}};
}

GeneralStructure to_space(const GeneralStructure& s) {
    if (s.kind != BaseKind::Frame) {
        throw PreconditionError("to_space expects a frame-based structure");
    }
    require_s4(s.frame, "to_space");
    DescriptiveReport rep = check_descriptive(s);
    if (!rep.compact || !rep.tight) {
        throw PreconditionError("to_space requires a compact and tight input: " +
                                (rep.tight ? std::string("compactness failed")
                                           : rep.tight_detail));
    }
    const size_t n = s.carrier();

    // Opens are generated by the up-closed members under union. The
    // result is intersection-closed as well: traces of basis elements
    // intersect inside the field and stay up-closed.
    std::vector<Subset> basis;
    for (const Subset& m : s.field.members) {
        if (is_upset(s.frame, m)) basis.push_back(m);
    }
    std::set<Subset> fam(basis.begin(), basis.end());
    fam.insert(empty_set(n));
    std::vector<Subset> work(fam.begin(), fam.end());
    while (!work.empty()) {
        Subset a = std::move(work.back());
        work.pop_back();
        for (const Subset& b : basis) {
            Subset u = a | b;
            if (fam.insert(u).second) {
                if (fam.size() > (size_t{1} << 16)) {
                    throw ResourceCapError(
                        "to_space: generated topology capped at 65536 opens");
                }
                work.push_back(std::move(u));
            }
        }
    }
    FiniteTopology topo =
        topology_from_opens(n, std::vector<Subset>(fam.begin(), fam.end()));

    if (specialization_order(topo).rel != s.frame.rel) {
        throw VerificationError(
            "to_space: specialization order of the generated topology does not "
            "return the input relation");
    }
    for (const Subset& m : s.field.members) {
        if (topo.closure(m) != s.field.closure.close(m)) {
            throw VerificationError(
                "to_space: topological and relational closure disagree at " +
                set_to_string(m));
        }
    }
    SetField field{n, s.field.members, rows_of(topo)};
    return GeneralStructure{BaseKind::Space, FiniteFrame{}, std::move(topo),
                            std::move(field)};
}

// ── Interior maps ──

InteriorMapReport check_interior_map(const std::vector<size_t>& f,
                                     const FiniteTopology& x,
                                     const FiniteTopology& y) {
    if (f.size() != x.n) {
        throw PreconditionError("map must assign every point of the source");
    }
    InteriorMapReport rep;
    for (size_t w = 0; w < x.n; ++w) {
        if (f[w] >= y.n) {
            rep.ok = false;
            rep.failed = "range";
            rep.detail = "point " + nm(w) + " maps to " + nm(f[w]) +
                         ", outside the target carrier";
            return rep;
        }
    }
    for (const Subset& o : y.opens) {
        Subset pre(x.n);
        for (size_t w = 0; w < x.n; ++w) {
            if (o.test(f[w])) pre.set(w);
        }
        if (!x.is_open(pre)) {
            rep.ok = false;
            rep.failed = "continuity";
            rep.detail = "preimage " + set_to_string(pre) + " of open " +
                         set_to_string(o) + " is not open";
            return rep;
        }
    }
    for (const Subset& u : x.opens) {
        Subset img(y.n);
        for (size_t w = u.find_first(); w != Subset::npos; w = u.find_next(w)) {
            img.set(f[w]);
        }
        if (!y.is_open(img)) {
            rep.ok = false;
            rep.failed = "openness";
            rep.detail = "image " + set_to_string(img) + " of open " +
                         set_to_string(u) + " is not open";
            return rep;
        }
    }
    Subset img(y.n);
    for (size_t w = 0; w < x.n; ++w) img.set(f[w]);
    rep.onto = img.all() || y.n == 0;
    return rep;
}

InteriorMapReport check_interior_map(const std::vector<size_t>& f,
                                     const GeneralStructure& x,
                                     const GeneralStructure& y) {
    InteriorMapReport rep;
    if (x.kind == BaseKind::Space && y.kind == BaseKind::Space) {
        rep = check_interior_map(f, x.space, y.space);
        if (!rep.ok) return rep;
    } else {
        // Finite spaces are Alexandroff, so interior maps coincide with
        // p-morphisms of the specialization orders. Frame-based inputs
        // use their relation directly.
        FiniteFrame fx =
            x.kind == BaseKind::Frame ? x.frame : specialization_order(x.space);
        FiniteFrame fy =
            y.kind == BaseKind::Frame ? y.frame : specialization_order(y.space);
        if (f.size() != fx.n) {
            throw PreconditionError("map must assign every point of the source");
        }
        PMorphismReport pm = check_p_morphism(fx, fy, f);
        rep.onto = pm.onto;
        if (!pm.ok) {
            rep.ok = false;
            if (pm.failed == "range") {
                rep.failed = "range";
                rep.detail = pm.detail();
            } else if (pm.failed == "forth") {
                rep.failed = "continuity";
                rep.detail = "preimage of the least open neighborhood of the "
                             "image of point " +
                             nm(pm.w) + " is not open: it contains " + nm(pm.w) +
                             " but not its successor " + nm(pm.v);
            } else {
                rep.failed = "openness";
                rep.detail = "image of the least open neighborhood of point " +
                             nm(pm.w) + " is not open: it misses point " +
                             nm(pm.v) + " above the image of " + nm(pm.w);
            }
            return rep;
        }
    }
    for (const Subset& b : y.field.members) {
        Subset pre(x.carrier());
        for (size_t w = 0; w < x.carrier(); ++w) {
            if (b.test(f[w])) pre.set(w);
        }
        if (!x.field.contains(pre)) {
            rep.ok = false;
            rep.failed = "field-pullback";
            rep.detail = "member " + set_to_string(b) + " pulls back to " +
                         set_to_string(pre) + ", which is not a member";
            return rep;
        }
    }
    return rep;
}

// ── Sums ──

SumResult sum(const std::vector<GeneralStructure>& parts) {
    SumResult out;
    if (parts.empty()) {
        FiniteTopology empty_topo{0, {empty_set(0)}};
        out.structure =
            GeneralStructure{BaseKind::Space, FiniteFrame{}, empty_topo,
                             SetField{0, {empty_set(0)}, ClosureOp::from_rows({})}};
        return out;
    }
    const BaseKind kind = parts.front().kind;
    for (const GeneralStructure& p : parts) {
        if (p.kind != kind) {
            throw PreconditionError("sum parts must all share a base kind");
        }
    }
    size_t total = 0;
    std::vector<size_t> offsets;
    for (const GeneralStructure& p : parts) {
        offsets.push_back(total);
        total += p.carrier();
    }
    for (size_t i = 0; i < parts.size(); ++i) {
        std::vector<size_t> inj;
        for (size_t w = 0; w < parts[i].carrier(); ++w) {
            inj.push_back(offsets[i] + w);
        }
        out.injections.push_back(std::move(inj));
    }

    // A set belongs to the sum family iff its trace on each part does,
    // so the family is the product of the part families.
    auto combine = [&](auto member_list, const char* what) {
        size_t count = 1;
        for (size_t i = 0; i < parts.size(); ++i) {
            count *= member_list(parts[i]).size();
            if (count > (size_t{1} << 16)) {
                throw ResourceCapError(std::string("sum ") + what +
                                       " family capped at 65536 sets");
            }
        }
        std::vector<Subset> fam;
        fam.reserve(count);
        std::vector<size_t> idx(parts.size(), 0);
        while (true) {
            Subset m(total);
            for (size_t i = 0; i < parts.size(); ++i) {
                m |= shift_into(member_list(parts[i])[idx[i]], offsets[i], total);
            }
            fam.push_back(std::move(m));
            size_t i = parts.size();
            while (i > 0) {
                --i;
                if (++idx[i] < member_list(parts[i]).size()) break;
                idx[i] = 0;
                if (i == 0) {
                    canonicalize(fam);
                    return fam;
                }
            }
        }
    };

    std::vector<Subset> members = combine(
        [](const GeneralStructure& p) -> const std::vector<Subset>& {
            return p.field.members;
        },
        "field");

    if (kind == BaseKind::Frame) {
        std::vector<FiniteFrame> frames;
        for (const GeneralStructure& p : parts) frames.push_back(p.frame);
        UnionResult u = disjoint_union(frames);
        ClosureOp op = ClosureOp::from_frame(u.frame);
        out.structure =
            GeneralStructure{BaseKind::Frame, std::move(u.frame), FiniteTopology{},
                             SetField{total, std::move(members), std::move(op)}};
    } else {
        std::vector<Subset> opens = combine(
            [](const GeneralStructure& p) -> const std::vector<Subset>& {
                return p.space.opens;
            },
            "opens");
        FiniteTopology topo{total, std::move(opens)};
        ClosureOp op = rows_of(topo);
        out.structure =
            GeneralStructure{BaseKind::Space, FiniteFrame{}, std::move(topo),
                             SetField{total, std::move(members), std::move(op)}};
    }
    return out;
}

// ── Gluing ──

GluingResult glue(const GluingSpec& spec) {
    if (spec.parts.empty()) {
        throw PreconditionError("glue needs at least one part");
    }
    if (spec.embeddings.size() != spec.parts.size()) {
        throw PreconditionError("glue needs one embedding per part");
    }
    const BaseKind kind = spec.shared.kind;
    for (const GeneralStructure& p : spec.parts) {
        if (p.kind != kind) {
            throw PreconditionError(
                "glue parts and the shared structure must share a base kind");
        }
    }
    const size_t sn = spec.shared.carrier();

    for (size_t i = 0; i < spec.parts.size(); ++i) {
        const GeneralStructure& part = spec.parts[i];
        const std::vector<size_t>& e = spec.embeddings[i];
        const std::string who = "glue embedding " + nm(i);
        if (e.size() != sn) {
            throw PreconditionError(who + " must map every shared point");
        }
        Subset im(part.carrier());
        for (size_t y = 0; y < sn; ++y) {
            if (e[y] >= part.carrier()) {
                throw PreconditionError(who + " sends point " + nm(y) +
                                        " outside part " + nm(i));
            }
            if (im.test(e[y])) {
                throw PreconditionError(who + " is not injective at point " + nm(y));
            }
            im.set(e[y]);
        }

        // The image must be an open subspace carrying the shared
        // structure and field isomorphically.
        if (kind == BaseKind::Frame) {
            if (!is_upset(part.frame, im)) {
                throw PreconditionError(who + " image " + set_to_string(im) +
                                        " is not open in part " + nm(i));
            }
            for (size_t y = 0; y < sn; ++y) {
                for (size_t z = 0; z < sn; ++z) {
                    if (spec.shared.frame.related(y, z) !=
                        part.frame.related(e[y], e[z])) {
                        throw PreconditionError(
                            who + " does not carry the shared relation: pair (" +
                            nm(y) + "," + nm(z) + ")");
                    }
                }
            }
        } else {
            if (!part.space.is_open(im)) {
                throw PreconditionError(who + " image " + set_to_string(im) +
                                        " is not open in part " + nm(i));
            }
            std::vector<Subset> pushed;
            for (const Subset& o : spec.shared.space.opens) {
                Subset po(part.carrier());
                for (size_t y = o.find_first(); y != Subset::npos;
                     y = o.find_next(y)) {
                    po.set(e[y]);
                }
                pushed.push_back(std::move(po));
            }
            canonicalize(pushed);
            std::vector<Subset> subspace;
            for (const Subset& u : part.space.opens) {
                if ((u & ~im).none()) subspace.push_back(u);
            }
            canonicalize(subspace);
            if (pushed != subspace) {
                throw PreconditionError(who +
                                        " is not a homeomorphism onto its image");
            }
        }

        std::vector<Subset> pulled;
        for (const Subset& m : part.field.members) {
            Subset pb(sn);
            for (size_t y = 0; y < sn; ++y) {
                if (m.test(e[y])) pb.set(y);
            }
            pulled.push_back(std::move(pb));
        }
        canonicalize(pulled);
        if (pulled != spec.shared.field.members) {
            throw PreconditionError(
                who + " does not pull the part field back onto the shared field");
        }
    }

    // Quotient classes: copies of a shared point collapse to one world,
    // represented by the least (part, world) pair. Part 0 contains the
    // least copy of every shared point.
    GluingResult out;
    std::vector<std::pair<size_t, size_t>> reps;
    out.projections.resize(spec.parts.size());
    std::vector<std::vector<size_t>> shared_at(spec.parts.size());
    for (size_t i = 0; i < spec.parts.size(); ++i) {
        shared_at[i].assign(spec.parts[i].carrier(), SIZE_MAX);
        for (size_t y = 0; y < sn; ++y) shared_at[i][spec.embeddings[i][y]] = y;
        out.projections[i].assign(spec.parts[i].carrier(), SIZE_MAX);
    }
    for (size_t i = 0; i < spec.parts.size(); ++i) {
        for (size_t w = 0; w < spec.parts[i].carrier(); ++w) {
            size_t y = shared_at[i][w];
            if (y != SIZE_MAX && i > 0) {
                out.projections[i][w] = out.projections[0][spec.embeddings[0][y]];
                continue;
            }
            out.projections[i][w] = reps.size();
            reps.emplace_back(i, w);
        }
    }
    const size_t q = reps.size();
    if (q > 16) {
        throw ResourceCapError("glued carrier exceeds 16 points");
    }

    auto preimage_in = [&](size_t i, const Subset& a) {
        Subset pre(spec.parts[i].carrier());
        for (size_t w = 0; w < spec.parts[i].carrier(); ++w) {
            if (a.test(out.projections[i][w])) pre.set(w);
        }
        return pre;
    };

    // The glued field holds exactly the sets whose preimage in every
    // part is a member; opens of a glued space arise the same way.
    std::vector<Subset> members;
    for (size_t mask = 0; mask < (size_t{1} << q); ++mask) {
        Subset a(q, mask);
        bool keep = true;
        for (size_t i = 0; i < spec.parts.size() && keep; ++i) {
            keep = spec.parts[i].field.contains(preimage_in(i, a));
        }
        if (keep) members.push_back(std::move(a));
    }

    bool any_labels = false;
    for (const GeneralStructure& p : spec.parts) {
        if (kind == BaseKind::Frame && !p.frame.labels.empty()) any_labels = true;
    }

    if (kind == BaseKind::Frame) {
        FiniteFrame glued;
        glued.n = q;
        glued.rel.assign(q, Subset(q));
        for (size_t i = 0; i < spec.parts.size(); ++i) {
            for (size_t w = 0; w < spec.parts[i].carrier(); ++w) {
                const Subset& row = spec.parts[i].frame.rel[w];
                for (size_t v = row.find_first(); v != Subset::npos;
                     v = row.find_next(v)) {
                    glued.rel[out.projections[i][w]].set(out.projections[i][v]);
                }
            }
        }
        if (any_labels) {
            for (auto [i, w] : reps) {
                glued.labels.push_back("p" + nm(i) + "." +
                                       spec.parts[i].frame.world_name(w));
            }
        }
        S4Report s4 = check_s4(glued);
        if (!s4.ok) {
            throw VerificationError("glued relation is not a preorder: " +
                                    s4.detail());
        }
        ClosureOp op = ClosureOp::from_frame(glued);
        SetField field{q, std::move(members), op};
        for (const Subset& m : field.members) {
            if (!field.contains(op.close(m))) {
                throw VerificationError("glued field not closed under closure at " +
                                        set_to_string(m));
            }
        }
        out.glued = GeneralStructure{BaseKind::Frame, std::move(glued),
                                     FiniteTopology{}, std::move(field)};
    } else {
        std::vector<Subset> opens;
        for (size_t mask = 0; mask < (size_t{1} << q); ++mask) {
            Subset a(q, mask);
            bool keep = true;
            for (size_t i = 0; i < spec.parts.size() && keep; ++i) {
                keep = spec.parts[i].space.is_open(preimage_in(i, a));
            }
            if (keep) opens.push_back(std::move(a));
        }
        FiniteTopology topo{q, std::move(opens)};
        ClosureOp op = rows_of(topo);
        SetField field{q, std::move(members), op};
        for (const Subset& m : field.members) {
            if (!field.contains(op.close(m))) {
                throw VerificationError("glued field not closed under closure at " +
                                        set_to_string(m));
            }
        }
        out.glued = GeneralStructure{BaseKind::Space, FiniteFrame{},
                                     std::move(topo), std::move(field)};
    }

    // The quotient map from the sum of the parts is interior and onto.
    SumResult total = sum(spec.parts);
    std::vector<size_t> rho(total.structure.carrier());
    for (size_t i = 0; i < spec.parts.size(); ++i) {
        for (size_t w = 0; w < spec.parts[i].carrier(); ++w) {
            rho[total.injections[i][w]] = out.projections[i][w];
        }
    }
    out.rho = check_interior_map(rho, total.structure, out.glued);
    if (!out.rho.ok) {
        throw VerificationError("gluing quotient map is not interior: " +
                                out.rho.detail);
    }
    if (!out.rho.onto) {
        throw VerificationError("gluing quotient map is not onto");
    }
    return out;
}

// ── Serialization ──

nlohmann::json space_to_json(const GeneralStructure& s) {
    if (s.kind != BaseKind::Space) {
        throw PreconditionError("space_to_json expects a space-based structure");
    }
    if (s.carrier() > 16) {
        throw ResourceCapError("space serialization capped at carrier 16");
    }
    nlohmann::json j;
    j["carrier"] = s.carrier();
    std::vector<uint64_t> opens, field;
    for (const Subset& o : s.space.opens) opens.push_back(o.to_ulong());
    for (const Subset& m : s.field.members) field.push_back(m.to_ulong());
    std::sort(opens.begin(), opens.end());
    std::sort(field.begin(), field.end());
    j["opens"] = opens;
    j["field"] = field;
    return j;
}

GeneralStructure space_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("carrier") || !j.contains("opens") ||
        !j.contains("field")) {
        throw PreconditionError(
            "space json needs carrier, opens, and field entries");
    }
    if (!j["carrier"].is_number_unsigned()) {
        throw PreconditionError("space json carrier must be a nonnegative integer");
    }
    const size_t n = j["carrier"].get<size_t>();
    if (n > 16) {
        throw ResourceCapError("space deserialization capped at carrier 16");
    }
    auto masks_of = [&](const char* key) {
        if (!j[key].is_array()) {
            throw PreconditionError(std::string("space json ") + key +
                                    " must be an array of subset masks");
        }
        std::vector<Subset> out;
        for (const auto& e : j[key]) {
            if (!e.is_number_unsigned() ||
                e.get<uint64_t>() >= (uint64_t{1} << n)) {
                throw PreconditionError(std::string("space json ") + key +
                                        " entry is not a subset mask");
            }
            out.push_back(Subset(n, e.get<uint64_t>()));
        }
        return out;
    };
    FiniteTopology topo = topology_from_opens(n, masks_of("opens"));
    return make_general_space(topo, masks_of("field"));
}

}  // namespace topos4
