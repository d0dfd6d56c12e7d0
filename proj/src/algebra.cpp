// ==== algebra.cpp — closure algebras, validity sweeps, Heyting opens ====

#include "topos4/algebra.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace topos4 {

// ── ClosureOp ──

ClosureOp ClosureOp::from_table(size_t n, const std::vector<uint64_t>& table) {
    if (n > 16) {
        throw ResourceCapError("tabulated closure operators cover carriers up to 16");
    }
    size_t want = size_t{1} << n;
    if (table.size() != want) {
        throw PreconditionError("closure table needs one entry per subset (" +
                                std::to_string(want) + "), got " +
                                std::to_string(table.size()));
    }
    ClosureOp op;
    op.n_ = n;
    op.tabulated_ = true;
    op.data_.reserve(want);
    for (uint64_t cmask : table) {
        if (cmask >= want) {
            throw PreconditionError("closure table value out of range");
        }
        op.data_.push_back(Subset(n, cmask));
    }
    return op;
}

ClosureOp ClosureOp::from_rows(std::vector<Subset> rows) {
    ClosureOp op;
    op.n_ = rows.size();
    for (const Subset& r : rows) {
        if (r.size() != op.n_) {
            throw PreconditionError("closure rows must match the carrier size");
        }
    }
    op.data_ = std::move(rows);
    return op;
}

ClosureOp ClosureOp::from_frame(const FiniteFrame& f) {
    std::vector<Subset> rows(f.n, Subset(f.n));
    for (size_t w = 0; w < f.n; ++w) {
        for (size_t v : elements(f.rel[w])) rows[v].set(w);  // w in c({v}) iff w R v
    }
    return from_rows(std::move(rows));
}

Subset ClosureOp::close(const Subset& a) const {
    if (a.size() != n_) {
        throw PreconditionError("closure argument has the wrong carrier size");
    }
    if (tabulated_) return data_[a.to_ulong()];
    Subset out(n_);
    for (size_t x = a.find_first(); x != Subset::npos; x = a.find_next(x)) {
        out |= data_[x];
    }
    return out;
}

Subset ClosureOp::interior(const Subset& a) const { return ~close(~a); }

std::string ClosureAxiomReport::detail() const {
    if (ok) return "closure axioms hold";
    std::ostringstream s;
    if (axiom == "normality") {
        s << "c(empty) = " << set_to_string(a) << ", not empty";
    } else if (axiom == "extensivity") {
        s << set_to_string(a) << " is not contained in its closure";
    } else if (axiom == "additivity") {
        s << "c(" << set_to_string(a) << " u " << set_to_string(b)
          << ") differs from c(" << set_to_string(a) << ") u c("
          << set_to_string(b) << ")";
    } else {
        s << "c(c(" << set_to_string(a) << ")) differs from c("
          << set_to_string(a) << ")";
    }
    return s.str();
}

ClosureAxiomReport check_closure_axioms(const ClosureOp& op) {
    ClosureAxiomReport r;
    size_t n = op.carrier();
    Subset empty(n);
    if (op.close(empty).any()) {
        r.ok = false;
        r.axiom = "normality";
        r.a = op.close(empty);
        return r;
    }
    if (op.tabulated()) {
        // whole-powerset sweep; singleton decomposition covers additivity
        size_t total = size_t{1} << n;
        for (size_t mask = 0; mask < total; ++mask) {
            Subset a(n, mask);
            Subset ca = op.close(a);
            if (!a.is_subset_of(ca)) {
                r.ok = false;
                r.axiom = "extensivity";
                r.a = a;
                return r;
            }
            Subset parts(n);
            for (size_t x : elements(a)) parts |= op.close(make_set(n, {x}));
            if (parts != ca) {
                // refine to a two-set witness of c(A u B) = c(A) u c(B)
                Subset rest = a;
                for (size_t x : elements(a)) {
                    Subset single = make_set(n, {x});
                    Subset without = a;
                    without.reset(x);
                    if ((op.close(without) | op.close(single)) != ca) {
                        r.a = without;
                        r.b = single;
                        break;
                    }
                }
                r.ok = false;
                r.axiom = "additivity";
                if (r.a.size() != n) {
                    r.a = a;
                    r.b = empty;
                }
                return r;
            }
        }
        for (size_t mask = 0; mask < total; ++mask) {
            Subset a(n, mask);
            if (op.close(op.close(a)) != op.close(a)) {
                r.ok = false;
                r.axiom = "idempotence";
                r.a = a;
                return r;
            }
        }
        return r;
    }
    // row form: normal and additive by construction
    for (size_t x = 0; x < n; ++x) {
        Subset single = make_set(n, {x});
        if (!op.close(single).test(x)) {
            r.ok = false;
            r.axiom = "extensivity";
            r.a = single;
            return r;
        }
    }
    for (size_t x = 0; x < n; ++x) {
        Subset single = make_set(n, {x});
        Subset c1 = op.close(single);
        if (op.close(c1) != c1) {
            r.ok = false;
            r.axiom = "idempotence";
            r.a = single;
            return r;
        }
    }
    return r;
}

// ── SetField ──

bool SetField::contains(const Subset& a) const {
    auto it = std::lower_bound(members.begin(), members.end(), a);
    return it != members.end() && *it == a;
}

size_t SetField::index_of(const Subset& a) const {
    auto it = std::lower_bound(members.begin(), members.end(), a);
    if (it == members.end() || *it != a) return SIZE_MAX;
    return static_cast<size_t>(it - members.begin());
}

bool operator==(const SetField& a, const SetField& b) {
    if (a.n != b.n || a.members != b.members) return false;
    for (const Subset& m : a.members) {
        if (a.closure.close(m) != b.closure.close(m)) return false;
    }
    return true;
}

SetField field_generate(size_t n, const ClosureOp& closure,
                        const std::vector<Subset>& generators,
                        size_t member_cap) {
    if (closure.carrier() != n) {
        throw PreconditionError("closure operator carrier mismatch");
    }
    ClosureAxiomReport ax = check_closure_axioms(closure);
    if (!ax.ok) {
        throw PreconditionError("field_generate: " + ax.detail());
    }
    std::set<Subset> pool{empty_set(n), full_set(n)};
    for (const Subset& g : generators) {
        if (g.size() != n) {
            throw PreconditionError("generator has the wrong carrier size");
        }
        pool.insert(g);
    }
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<Subset> snapshot(pool.begin(), pool.end());
        for (const Subset& a : snapshot) {
            changed |= pool.insert(~a).second;
            changed |= pool.insert(closure.close(a)).second;
        }
        for (size_t i = 0; i < snapshot.size(); ++i) {
            for (size_t j = i + 1; j < snapshot.size(); ++j) {
                changed |= pool.insert(snapshot[i] & snapshot[j]).second;
            }
        }
        if (pool.size() > member_cap) {
            throw ResourceCapError("generated field exceeds " +
                                   std::to_string(member_cap) + " members");
        }
    }
    SetField f;
    f.n = n;
    f.members.assign(pool.begin(), pool.end());
    f.closure = closure;
    return f;
}

SetField powerset_field(size_t n, const ClosureOp& closure) {
    if (n > 16) {
        throw ResourceCapError("powerset fields cover carriers up to 16");
    }
    ClosureAxiomReport ax = check_closure_axioms(closure);
    if (!ax.ok) {
        throw PreconditionError("powerset_field: " + ax.detail());
    }
    SetField f;
    f.n = n;
    f.members.reserve(size_t{1} << n);
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        f.members.push_back(Subset(n, mask));
    }
    std::sort(f.members.begin(), f.members.end());
    f.closure = closure;
    return f;
}

SetField powerset_field(const FiniteFrame& f) {
    return powerset_field(f.n, ClosureOp::from_frame(f));
}

// ── Evaluation ──

Subset evaluate(FormulaArena& ar, FormulaId f, const SetField& field,
                const Valuation& val) {
    for (const auto& [letter, s] : val) {
        if (s.size() != field.n) {
            throw PreconditionError("valuation of '" + ar.letter_name(letter) +
                                    "' has the wrong carrier size");
        }
        if (!field.contains(s)) {
            throw PreconditionError("valuation of '" + ar.letter_name(letter) +
                                    "' = " + set_to_string(s) +
                                    " is not a field member");
        }
    }
    FormulaId d = ar.desugar(f);
    std::map<FormulaId, Subset> memo;
    std::function<Subset(FormulaId)> go = [&](FormulaId g) -> Subset {
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        const FormulaNode& node = ar.node(g);
        Subset out;
        switch (node.kind) {
            case FK::Letter: {
                auto hit = val.find(node.a);
                if (hit == val.end()) {
                    throw PreconditionError("letter '" + ar.letter_name(node.a) +
                                            "' is unassigned");
                }
                out = hit->second;
                break;
            }
            case FK::Top:     out = full_set(field.n); break;
            case FK::Bottom:  out = empty_set(field.n); break;
            case FK::And:     out = go(node.a) & go(node.b); break;
            case FK::Or:      out = go(node.a) | go(node.b); break;
            case FK::Implies: out = ~go(node.a) | go(node.b); break;
            case FK::Diamond: out = field.closure.close(go(node.a)); break;
            case FK::Box:     out = field.closure.interior(go(node.a)); break;
            default:
                throw VerificationError("desugared formula still has sugar");
        }
        memo.emplace(g, out);
        return out;
    };
    Subset result = go(d);
    if (!field.contains(result)) {
        throw VerificationError("evaluation left the field: " +
                                set_to_string(result));
    }
    return result;
}

// Shared valuation sweep: calls eval for each tuple of candidate sets,
// last letter varying fastest, and reports the first refutation.
static ValidityReport sweep(FormulaArena& ar, FormulaId f,
                            const std::vector<Subset>& candidates, size_t n,
                            int letter_cap,
                            const std::function<Subset(const Valuation&)>& eval) {
    int cap = letter_cap < 0 ? default_letter_cap() : letter_cap;
    std::vector<uint32_t> letters = letters_of(ar, f);
    if (letters.size() > static_cast<size_t>(cap)) {
        throw ResourceCapError("formula has " + std::to_string(letters.size()) +
                               " letters; the sweep cap is " + std::to_string(cap) +
                               " (override with TOPOS4_CAP)");
    }
    ValidityReport report;
    size_t L = letters.size();
    std::vector<size_t> odo(L, 0);
    for (;;) {
        Valuation val;
        for (size_t i = 0; i < L; ++i) val[letters[i]] = candidates[odo[i]];
        Subset value = eval(val);
        if (value.count() != n) {
            report.valid = false;
            for (size_t i = 0; i < L; ++i) {
                report.countervaluation.emplace_back(ar.letter_name(letters[i]),
                                                     candidates[odo[i]]);
            }
            Subset missing = ~value;
            report.world = missing.find_first();
            return report;
        }
        size_t i = L;
        while (i > 0 && odo[i - 1] + 1 == candidates.size()) odo[--i] = 0;
        if (i == 0) break;
        ++odo[i - 1];
    }
    return report;
}

ValidityReport validates(FormulaArena& ar, const SetField& field, FormulaId f,
                         int letter_cap) {
    if (field.members.empty()) {
        throw PreconditionError("validates needs a nonempty field");
    }
    return sweep(ar, f, field.members, field.n, letter_cap,
                 [&](const Valuation& val) { return evaluate(ar, f, field, val); });
}

bool is_connected(const SetField& field) {
    for (const Subset& a : field.members) {
        if (!a.any() || a.count() == field.n) continue;
        if (field.closure.close(a) == a && field.closure.close(~a) == ~a) {
            return false;
        }
    }
    return true;
}

bool is_well_connected(const SetField& field) {
    for (const Subset& a : field.members) {
        if (!a.any()) continue;
        Subset ca = field.closure.close(a);
        for (const Subset& b : field.members) {
            if (!b.any()) continue;
            if (!ca.intersects(field.closure.close(b))) return false;
        }
    }
    return true;
}

// ── Heyting algebra of open elements ──

Subset HeytingAlgebra::impl(const Subset& a, const Subset& b) const {
    return closure.interior(~a | b);
}

size_t HeytingAlgebra::index_of(const Subset& a) const {
    auto it = std::lower_bound(opens.begin(), opens.end(), a);
    if (it == opens.end() || *it != a) return SIZE_MAX;
    return static_cast<size_t>(it - opens.begin());
}

HeytingAlgebra open_elements(const SetField& field) {
    HeytingAlgebra h;
    h.n = field.n;
    h.closure = field.closure;
    for (const Subset& a : field.members) {
        if (field.closure.interior(a) == a) h.opens.push_back(a);
    }
    if (h.opens.empty() || h.opens.front().any() ||
        h.opens.back().count() != h.n) {
        throw PreconditionError("open elements lack bottom or top");
    }
    if (h.opens.size() > 256) {
        throw ResourceCapError("residuation check capped at 256 opens, got " +
                               std::to_string(h.opens.size()));
    }
    for (const Subset& a : h.opens) {
        for (const Subset& b : h.opens) {
            if (h.index_of(a & b) == SIZE_MAX || h.index_of(a | b) == SIZE_MAX ||
                h.index_of(h.impl(a, b)) == SIZE_MAX) {
                throw PreconditionError(
                    "opens not closed under the lattice operations at " +
                    set_to_string(a) + ", " + set_to_string(b) +
                    "; input is not a closure algebra");
            }
        }
    }
    for (const Subset& a : h.opens) {
        for (const Subset& b : h.opens) {
            Subset ab = h.impl(a, b);
            for (const Subset& x : h.opens) {
                if ((a & x).is_subset_of(b) != x.is_subset_of(ab)) {
                    throw PreconditionError(
                        "residuation fails at a=" + set_to_string(a) +
                        ", b=" + set_to_string(b) + ", x=" + set_to_string(x) +
                        "; input is not a closure algebra");
                }
            }
        }
    }
    return h;
}

ValidityReport heyting_validates(FormulaArena& ar, const HeytingAlgebra& h,
                                 FormulaId f, int letter_cap) {
    if (has_modal(ar, f)) {
        throw PreconditionError("heyting_validates takes an intuitionistic "
                                "formula, got: " + print(ar, f));
    }
    FormulaId d = ar.desugar(f);
    auto eval = [&](const Valuation& val) {
        std::map<FormulaId, Subset> memo;
        std::function<Subset(FormulaId)> go = [&](FormulaId g) -> Subset {
            auto it = memo.find(g);
            if (it != memo.end()) return it->second;
            const FormulaNode& node = ar.node(g);
            Subset out;
            switch (node.kind) {
                case FK::Letter:  out = val.at(node.a); break;
                case FK::Top:     out = full_set(h.n); break;
                case FK::Bottom:  out = empty_set(h.n); break;
                case FK::And:     out = go(node.a) & go(node.b); break;
                case FK::Or:      out = go(node.a) | go(node.b); break;
                case FK::Implies: out = h.impl(go(node.a), go(node.b)); break;
                default:
                    throw VerificationError("desugared formula still has sugar");
            }
            memo.emplace(g, out);
            return out;
        };
        Subset value = go(d);
        if (h.index_of(value) == SIZE_MAX) {
            throw VerificationError("Heyting evaluation left the opens: " +
                                    set_to_string(value));
        }
        return value;
    };
    return sweep(ar, f, h.opens, h.n, letter_cap, eval);
}

// ── Serialization ──

nlohmann::json field_to_json(const SetField& field) {
    if (field.n > 16) {
        throw ResourceCapError("field JSON tabulates the closure; carrier <= 16");
    }
    nlohmann::json j;
    j["carrier"] = field.n;
    std::vector<uint64_t> masks;
    for (const Subset& m : field.members) masks.push_back(m.to_ulong());
    std::sort(masks.begin(), masks.end());
    j["members"] = masks;
    auto table = nlohmann::json::array();
    for (size_t mask = 0; mask < (size_t{1} << field.n); ++mask) {
        table.push_back(
            {mask, field.closure.close(Subset(field.n, mask)).to_ulong()});
    }
    j["closure"] = std::move(table);
    return j;
}

SetField field_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("carrier") || !j.contains("members") ||
        !j.contains("closure")) {
        throw PreconditionError(
            "field JSON needs \"carrier\", \"members\", and \"closure\"");
    }
    if (!j["carrier"].is_number_unsigned()) {
        throw PreconditionError("\"carrier\" must be a non-negative integer");
    }
    size_t n = j["carrier"].get<size_t>();
    if (n > 16) {
        throw ResourceCapError("field JSON covers carriers up to 16");
    }
    size_t total = size_t{1} << n;
    if (!j["members"].is_array() || !j["closure"].is_array()) {
        throw PreconditionError("\"members\" and \"closure\" must be arrays");
    }
    std::vector<uint64_t> table(total, UINT64_MAX);
    for (const auto& e : j["closure"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
            !e[1].is_number_unsigned()) {
            throw PreconditionError("closure entries must be [mask, cmask] pairs");
        }
        uint64_t mask = e[0].get<uint64_t>(), cmask = e[1].get<uint64_t>();
        if (mask >= total || cmask >= total) {
            throw PreconditionError("closure mask out of range");
        }
        if (table[mask] != UINT64_MAX) {
            throw PreconditionError("closure table lists a mask twice");
        }
        table[mask] = cmask;
    }
    for (size_t mask = 0; mask < total; ++mask) {
        if (table[mask] == UINT64_MAX) {
            throw PreconditionError("closure table misses mask " +
                                    std::to_string(mask));
        }
    }
    ClosureOp op = ClosureOp::from_table(n, table);
    ClosureAxiomReport ax = check_closure_axioms(op);
    if (!ax.ok) {
        throw PreconditionError("field JSON closure: " + ax.detail());
    }
    SetField f;
    f.n = n;
    f.closure = op;
    for (const auto& e : j["members"]) {
        if (!e.is_number_unsigned() || e.get<uint64_t>() >= total) {
            throw PreconditionError("member mask out of range");
        }
        f.members.push_back(Subset(n, e.get<uint64_t>()));
    }
    std::sort(f.members.begin(), f.members.end());
    f.members.erase(std::unique(f.members.begin(), f.members.end()),
                    f.members.end());
    if (!f.contains(empty_set(n)) || !f.contains(full_set(n))) {
        throw PreconditionError("field must contain the empty set and the carrier");
    }
    for (const Subset& m : f.members) {
        if (!f.contains(~m)) {
            throw PreconditionError("field not closed under complement at " +
                                    set_to_string(m));
        }
        if (!f.contains(op.close(m))) {
            throw PreconditionError("field not closed under closure at " +
                                    set_to_string(m));
        }
        for (const Subset& k : f.members) {
            if (!f.contains(m & k)) {
                throw PreconditionError("field not closed under intersection at " +
                                        set_to_string(m) + ", " + set_to_string(k));
            }
        }
    }
    return f;
}

}  // namespace topos4
