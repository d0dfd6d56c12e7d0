// ==== frames.cpp — finite frames, preorder structure, maps, catalogs ====

#include "topos4/frames.hpp"

#include <algorithm>
#include <sstream>

namespace topos4 {

bool operator==(const FiniteFrame& a, const FiniteFrame& b) {
    return a.n == b.n && a.rel == b.rel && a.labels == b.labels;
}

FiniteFrame make_frame(size_t n,
                       const std::vector<std::pair<size_t, size_t>>& pairs,
                       std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n) {
        throw PreconditionError("labels must be empty or one per world");
    }
    FiniteFrame f;
    f.n = n;
    f.rel.assign(n, Subset(n));
    f.labels = std::move(labels);
    for (auto [w, v] : pairs) {
        if (w >= n || v >= n) {
            throw PreconditionError("relation pair (" + std::to_string(w) + "," +
                                    std::to_string(v) + ") out of range for " +
                                    std::to_string(n) + " worlds");
        }
        f.rel[w].set(v);
    }
    return f;
}

std::vector<std::pair<size_t, size_t>> relation_pairs(const FiniteFrame& f) {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t w = 0; w < f.n; ++w) {
        for (size_t v : elements(f.rel[w])) out.emplace_back(w, v);
    }
    return out;
}

// ── Preorder structure ──

std::string S4Report::detail() const {
    if (ok) return "reflexive and transitive";
    std::ostringstream s;
    if (failed == "reflexivity") {
        s << "missing reflexive pair (" << w << "," << w << ")";
    } else {
        s << "missing transitive pair (" << w << "," << v << ") via " << via;
    }
    return s.str();
}

S4Report check_s4(const FiniteFrame& f) {
    S4Report r;
    for (size_t w = 0; w < f.n; ++w) {
        if (!f.rel[w].test(w)) {
            r.ok = false;
            r.failed = "reflexivity";
            r.w = r.v = w;
            return r;
        }
    }
    for (size_t w = 0; w < f.n; ++w) {
        for (size_t u : elements(f.rel[w])) {
            if (!f.rel[u].is_subset_of(f.rel[w])) {
                Subset missing = f.rel[u] - f.rel[w];
                r.ok = false;
                r.failed = "transitivity";
                r.w = w;
                r.v = missing.find_first();
                r.via = u;
                return r;
            }
        }
    }
    return r;
}

void require_s4(const FiniteFrame& f, const std::string& who) {
    S4Report r = check_s4(f);
    if (!r.ok) {
        throw PreconditionError(who + " needs a preorder: " + r.detail());
    }
}

Subset image(const FiniteFrame& f, const Subset& a) {
    Subset out(f.n);
    for (size_t w : elements(a)) out |= f.rel[w];
    return out;
}

Subset preimage(const FiniteFrame& f, const Subset& a) {
    Subset out(f.n);
    for (size_t w = 0; w < f.n; ++w) {
        if (f.rel[w].intersects(a)) out.set(w);
    }
    return out;
}

bool is_upset(const FiniteFrame& f, const Subset& a) {
    for (size_t w : elements(a)) {
        if (!f.rel[w].is_subset_of(a)) return false;
    }
    return true;
}

std::vector<size_t> roots(const FiniteFrame& f) {
    std::vector<size_t> out;
    for (size_t w = 0; w < f.n; ++w) {
        if (f.rel[w].count() == f.n) out.push_back(w);
    }
    return out;
}

std::vector<std::vector<size_t>> clusters(const FiniteFrame& f) {
    require_s4(f, "clusters");
    std::vector<std::vector<size_t>> out;
    std::vector<bool> placed(f.n, false);
    for (size_t w = 0; w < f.n; ++w) {
        if (placed[w]) continue;
        std::vector<size_t> cl;
        for (size_t v : elements(f.rel[w])) {
            if (f.rel[v].test(w)) {
                cl.push_back(v);
                placed[v] = true;
            }
        }
        out.push_back(std::move(cl));
    }
    return out;
}

std::vector<std::vector<size_t>> maximal_clusters(const FiniteFrame& f) {
    std::vector<std::vector<size_t>> out;
    for (auto& cl : clusters(f)) {
        Subset cset = make_set(f.n, cl);
        if (image(f, cset) == cset) out.push_back(cl);
    }
    return out;
}

SubframeResult generated_subframe(const FiniteFrame& f, size_t w) {
    if (w >= f.n) throw PreconditionError("generated_subframe: world out of range");
    require_s4(f, "generated_subframe");
    SubframeResult res;
    res.worlds = elements(f.rel[w]);
    std::vector<size_t> pos(f.n, 0);
    for (size_t i = 0; i < res.worlds.size(); ++i) pos[res.worlds[i]] = i;
    res.frame.n = res.worlds.size();
    res.frame.rel.assign(res.frame.n, Subset(res.frame.n));
    for (size_t i = 0; i < res.worlds.size(); ++i) {
        for (size_t v : elements(f.rel[res.worlds[i]])) {
            res.frame.rel[i].set(pos[v]);  // R(w) is an upset, so v is in carrier
        }
    }
    if (!f.labels.empty()) {
        for (size_t v : res.worlds) res.frame.labels.push_back(f.labels[v]);
    }
    return res;
}

UnionResult disjoint_union(const std::vector<FiniteFrame>& parts) {
    UnionResult res;
    size_t total = 0;
    bool any_labels = false;
    for (const auto& p : parts) {
        total += p.n;
        any_labels = any_labels || !p.labels.empty();
    }
    res.frame.n = total;
    res.frame.rel.assign(total, Subset(total));
    size_t base = 0;
    for (size_t k = 0; k < parts.size(); ++k) {
        const FiniteFrame& p = parts[k];
        std::vector<size_t> inj(p.n);
        for (size_t w = 0; w < p.n; ++w) {
            inj[w] = base + w;
            for (size_t v : elements(p.rel[w])) res.frame.rel[base + w].set(base + v);
        }
        if (any_labels) {
            for (size_t w = 0; w < p.n; ++w) {
                res.frame.labels.push_back("p" + std::to_string(k) + "." +
                                           p.world_name(w));
            }
        }
        res.injections.push_back(std::move(inj));
        base += p.n;
    }
    return res;
}

// ── Maps and quotients ──

std::string PMorphismReport::detail() const {
    if (ok) return "p-morphism";
    std::ostringstream s;
    if (failed == "range") {
        s << "world " << w << " maps to " << v << ", outside the target";
    } else if (failed == "forth") {
        s << "forth fails: " << w << " R " << v
          << " but their images are unrelated";
    } else {
        s << "back fails: f(" << w << ") sees " << v
          << " with no matching successor of " << w;
    }
    return s.str();
}

PMorphismReport check_p_morphism(const FiniteFrame& src,
                                 const FiniteFrame& dst,
                                 const std::vector<size_t>& f) {
    PMorphismReport r;
    if (f.size() != src.n) {
        throw PreconditionError("map must assign every source world");
    }
    for (size_t w = 0; w < src.n; ++w) {
        if (f[w] >= dst.n) {
            r.ok = false;
            r.failed = "range";
            r.w = w;
            r.v = f[w];
            return r;
        }
    }
    for (size_t w = 0; w < src.n; ++w) {
        for (size_t v : elements(src.rel[w])) {
            if (!dst.related(f[w], f[v])) {
                r.ok = false;
                r.failed = "forth";
                r.w = w;
                r.v = v;
                return r;
            }
        }
    }
    for (size_t w = 0; w < src.n; ++w) {
        for (size_t v : elements(dst.rel[f[w]])) {
            bool hit = false;
            for (size_t u : elements(src.rel[w])) {
                if (f[u] == v) {
                    hit = true;
                    break;
                }
            }
            if (!hit) {
                r.ok = false;
                r.failed = "back";
                r.w = w;
                r.v = v;
                return r;
            }
        }
    }
    Subset covered(dst.n);
    for (size_t w = 0; w < src.n; ++w) covered.set(f[w]);
    r.onto = covered.count() == dst.n;
    return r;
}

QuotientResult quotient(const FiniteFrame& f,
                        const std::vector<std::vector<size_t>>& blocks) {
    QuotientResult res;
    res.block_of.assign(f.n, SIZE_MAX);
    for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw PreconditionError("quotient: empty block");
        for (size_t w : blocks[b]) {
            if (w >= f.n) throw PreconditionError("quotient: world out of range");
            if (res.block_of[w] != SIZE_MAX) {
                throw PreconditionError("quotient: world " + std::to_string(w) +
                                        " appears in two blocks");
            }
            res.block_of[w] = b;
        }
    }
    for (size_t w = 0; w < f.n; ++w) {
        if (res.block_of[w] == SIZE_MAX) {
            throw PreconditionError("quotient: world " + std::to_string(w) +
                                    " not covered by any block");
        }
    }
    size_t m = blocks.size();
    res.frame.n = m;
    res.frame.rel.assign(m, Subset(m));
    for (size_t w = 0; w < f.n; ++w) {
        for (size_t v : elements(f.rel[w])) {
            res.frame.rel[res.block_of[w]].set(res.block_of[v]);
        }
    }
    return res;
}

// ── Stock frames ──

FiniteFrame make_cluster(size_t n) {
    if (n == 0) throw PreconditionError("make_cluster needs n >= 1");
    FiniteFrame f;
    f.n = n;
    f.rel.assign(n, full_set(n));
    for (size_t w = 0; w < n; ++w) f.labels.push_back("w" + std::to_string(w));
    return f;
}

FiniteFrame make_chain(size_t n) {
    if (n == 0) throw PreconditionError("make_chain needs n >= 1");
    FiniteFrame f;
    f.n = n;
    f.rel.assign(n, Subset(n));
    for (size_t w = 0; w < n; ++w) {
        for (size_t v = w; v < n; ++v) f.rel[w].set(v);
        f.labels.push_back("c" + std::to_string(w));
    }
    return f;
}

FiniteFrame make_fork(size_t alpha) {
    if (alpha == 0) throw PreconditionError("make_fork needs alpha >= 1");
    size_t n = alpha + 2;
    FiniteFrame f;
    f.n = n;
    f.rel.assign(n, Subset(n));
    f.rel[0] = full_set(n);             // root sees everything
    f.rel[1].set(1);                    // m is terminal
    for (size_t w = 2; w < n; ++w) {    // the alpha-cluster
        for (size_t v = 2; v < n; ++v) f.rel[w].set(v);
    }
    f.labels = {"r", "m"};
    for (size_t k = 0; k < alpha; ++k) f.labels.push_back("w" + std::to_string(k));
    return f;
}

// ── Truncated trees ──

static size_t tree_node_count(size_t b, size_t d) {
    size_t count = 1, level = 1;
    for (size_t l = 1; l <= d; ++l) {
        level *= b;
        count += level;
        if (count > (1u << 20)) return SIZE_MAX;
    }
    return count;
}

size_t TruncatedTree::node_of(const std::vector<uint8_t>& seq) const {
    if (seq.size() > depth) throw PreconditionError("word longer than the tree depth");
    size_t idx = 0;
    for (uint8_t digit : seq) idx = child(idx, digit);
    return idx;
}

size_t TruncatedTree::child(size_t node, uint8_t digit) const {
    size_t l = depth_of(node);
    if (l >= depth) throw PreconditionError("node at the truncation depth has no children");
    if (digit >= branching) throw PreconditionError("digit out of range");
    // level l starts at (b^l - 1)/(b - 1); children keep BFS order
    size_t start = 0, width = 1;
    for (size_t k = 0; k < l; ++k) {
        start += width;
        width *= branching;
    }
    return start + width + (node - start) * branching + digit;
}

std::vector<size_t> TruncatedTree::children(size_t node) const {
    std::vector<size_t> out;
    if (depth_of(node) >= depth) return out;
    for (size_t digit = 0; digit < branching; ++digit) {
        out.push_back(child(node, static_cast<uint8_t>(digit)));
    }
    return out;
}

TruncatedTree truncated_tree(size_t b, size_t d) {
    if (b == 0) throw PreconditionError("truncated_tree needs branching >= 1");
    size_t count = tree_node_count(b, d);
    if (count == SIZE_MAX) {
        throw ResourceCapError("truncated_tree(" + std::to_string(b) + "," +
                               std::to_string(d) + ") exceeds the node cap");
    }
    TruncatedTree t;
    t.branching = b;
    t.depth = d;
    t.seqs.reserve(count);
    t.seqs.push_back({});
    for (size_t i = 0; i < t.seqs.size(); ++i) {
        if (t.seqs[i].size() == d) continue;
        for (size_t digit = 0; digit < b; ++digit) {
            auto s = t.seqs[i];
            s.push_back(static_cast<uint8_t>(digit));
            t.seqs.push_back(std::move(s));
        }
    }
    t.frame.n = count;
    t.frame.rel.assign(count, Subset(count));
    // children come after parents in BFS order, so one reverse sweep
    // accumulates full descendant sets
    for (size_t i = count; i-- > 0;) {
        t.frame.rel[i].set(i);
        if (t.seqs[i].size() < d) {
            size_t first = t.child(i, 0);
            for (size_t digit = 0; digit < b; ++digit) {
                t.frame.rel[i] |= t.frame.rel[first + digit];
            }
        }
    }
    return t;
}

std::vector<size_t> comb_roots(const TruncatedTree& t) {
    if (t.branching != 2) {
        throw PreconditionError("comb_roots is defined on the binary tree");
    }
    std::vector<size_t> out;
    std::vector<uint8_t> word;
    for (size_t k = 0; k < t.depth; ++k) {
        word.assign(k, 0);
        word.push_back(1);
        out.push_back(t.node_of(word));
    }
    return out;
}

// ── Catalog ──

std::vector<FiniteFrame> enumerate_preorders(size_t n) {
    if (n == 0 || n > 5) {
        throw ResourceCapError("enumerate_preorders covers 1 to 5 worlds");
    }
    std::vector<std::pair<size_t, size_t>> slots;  // off-diagonal cells
    for (size_t w = 0; w < n; ++w) {
        for (size_t v = 0; v < n; ++v) {
            if (w != v) slots.emplace_back(w, v);
        }
    }
    std::vector<FiniteFrame> out;
    for (uint64_t mask = 0; mask < (1ull << slots.size()); ++mask) {
        FiniteFrame f;
        f.n = n;
        f.rel.assign(n, Subset(n));
        for (size_t w = 0; w < n; ++w) f.rel[w].set(w);
        for (size_t k = 0; k < slots.size(); ++k) {
            if (mask & (1ull << k)) f.rel[slots[k].first].set(slots[k].second);
        }
        bool transitive = true;
        for (size_t w = 0; w < n && transitive; ++w) {
            for (size_t u : elements(f.rel[w])) {
                if (!f.rel[u].is_subset_of(f.rel[w])) {
                    transitive = false;
                    break;
                }
            }
        }
        if (transitive) out.push_back(std::move(f));
    }
    return out;
}

bool is_rooted(const FiniteFrame& f) { return !roots(f).empty(); }

bool is_poset(const FiniteFrame& f) {
    for (const auto& cl : clusters(f)) {
        if (cl.size() > 1) return false;
    }
    return true;
}

bool is_connected_frame(const FiniteFrame& f) {
    if (f.n == 0) return true;
    Subset seen(f.n);
    seen.set(0);
    for (;;) {
        Subset next = seen;
        next |= image(f, seen);
        next |= preimage(f, seen);
        if (next == seen) break;
        seen = next;
    }
    return seen.count() == f.n;
}

// ── Serialization ──

nlohmann::json frame_to_json(const FiniteFrame& f) {
    nlohmann::json j;
    j["worlds"] = f.n;
    auto rel = nlohmann::json::array();
    for (auto [w, v] : relation_pairs(f)) rel.push_back({w, v});
    j["relation"] = std::move(rel);
    if (!f.labels.empty()) {
        nlohmann::json labels = nlohmann::json::object();
        for (size_t w = 0; w < f.n; ++w) labels[std::to_string(w)] = f.labels[w];
        j["labels"] = std::move(labels);
    }
    return j;
}

FiniteFrame frame_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("worlds") || !j.contains("relation")) {
        throw PreconditionError("frame JSON needs \"worlds\" and \"relation\"");
    }
    if (!j["worlds"].is_number_unsigned()) {
        throw PreconditionError("\"worlds\" must be a non-negative integer");
    }
    size_t n = j["worlds"].get<size_t>();
    if (n > (1u << 20)) throw ResourceCapError("frame too large");
    if (!j["relation"].is_array()) {
        throw PreconditionError("\"relation\" must be an array of pairs");
    }
    std::vector<std::pair<size_t, size_t>> pairs;
    for (const auto& e : j["relation"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
            !e[1].is_number_unsigned()) {
            throw PreconditionError("relation entries must be [from, to] pairs");
        }
        pairs.emplace_back(e[0].get<size_t>(), e[1].get<size_t>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_object()) {
            throw PreconditionError("\"labels\" must map world indices to names");
        }
        labels.resize(n);
        for (size_t w = 0; w < n; ++w) labels[w] = std::to_string(w);
        for (const auto& [key, val] : j["labels"].items()) {
            size_t w = 0;
            try {
                w = std::stoul(key);
            } catch (...) {
                throw PreconditionError("label key '" + key + "' is not a world");
            }
            if (w >= n) throw PreconditionError("label key '" + key + "' out of range");
            if (!val.is_string()) throw PreconditionError("label values must be strings");
            labels[w] = val.get<std::string>();
        }
    }
    return make_frame(n, pairs, std::move(labels));
}

std::string frame_to_dot(const FiniteFrame& f) {
    require_s4(f, "frame_to_dot");
    auto cls = clusters(f);
    std::vector<size_t> cluster_of(f.n, 0);
    for (size_t c = 0; c < cls.size(); ++c) {
        for (size_t w : cls[c]) cluster_of[w] = c;
    }
    // order between clusters, then its cover relation
    size_t m = cls.size();
    std::vector<Subset> below(m, Subset(m));
    for (size_t c = 0; c < m; ++c) {
        for (size_t v : elements(image(f, make_set(f.n, cls[c])))) {
            below[c].set(cluster_of[v]);
        }
    }
    std::ostringstream dot;
    dot << "digraph frame {\n  rankdir=BT;\n  compound=true;\n"
        << "  node [shape=ellipse];\n";
    for (size_t c = 0; c < m; ++c) {
        if (cls[c].size() == 1) {
            size_t w = cls[c][0];
            dot << "  n" << w << " [label=\"" << f.world_name(w) << "\"];\n";
        } else {
            dot << "  subgraph cluster_" << c << " {\n    style=rounded;\n";
            for (size_t w : cls[c]) {
                dot << "    n" << w << " [label=\"" << f.world_name(w) << "\"];\n";
            }
            dot << "  }\n";
        }
    }
    for (size_t c = 0; c < m; ++c) {
        for (size_t e : elements(below[c])) {
            if (e == c) continue;
            bool covered = false;  // skip edges implied by a chain through k
            for (size_t k : elements(below[c])) {
                if (k != c && k != e && below[k].test(e)) {
                    covered = true;
                    break;
                }
            }
            if (covered) continue;
            dot << "  n" << cls[c][0] << " -> n" << cls[e][0];
            if (cls[c].size() > 1 || cls[e].size() > 1) {
                dot << " [";
                if (cls[c].size() > 1) dot << "ltail=cluster_" << c;
                if (cls[c].size() > 1 && cls[e].size() > 1) dot << ", ";
                if (cls[e].size() > 1) dot << "lhead=cluster_" << e;
                dot << "]";
            }
            dot << ";\n";
        }
    }
    dot << "}\n";
    return dot.str();
}

}  // namespace topos4
