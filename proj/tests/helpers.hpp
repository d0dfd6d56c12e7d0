#pragma once

// Seeded random generators shared by the test binaries. Every generator
// takes the engine by reference so call sites control determinism.

#include <random>
#include <string>
#include <vector>

#include "topos4/formula.hpp"
#include "topos4/frames.hpp"
#include "topos4/genspace.hpp"

namespace testgen {

inline topos4::FiniteFrame random_preorder(std::mt19937_64& rng, size_t n,
                                           double edge_p = 0.3) {
    std::bernoulli_distribution coin(edge_p);
    topos4::FiniteFrame f;
    f.n = n;
    f.rel.assign(n, topos4::Subset(n));
    for (size_t w = 0; w < n; ++w) {
        f.rel[w].set(w);
        for (size_t v = 0; v < n; ++v) {
            if (w != v && coin(rng)) f.rel[w].set(v);
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t w = 0; w < n; ++w) {
            for (size_t v : topos4::elements(f.rel[w])) {
                if (!f.rel[v].is_subset_of(f.rel[w])) {
                    f.rel[w] |= f.rel[v];
                    changed = true;
                }
            }
        }
    }
    return f;
}

inline topos4::FormulaId random_formula(topos4::FormulaArena& ar,
                                        std::mt19937_64& rng,
                                        const std::vector<std::string>& letters,
                                        int depth, bool allow_modal = true) {
    std::uniform_int_distribution<int> pct(0, 99);
    if (depth <= 0 || pct(rng) < 30) {
        std::uniform_int_distribution<size_t> pick(0, letters.size() + 1);
        size_t k = pick(rng);
        if (k == letters.size()) return ar.top();
        if (k == letters.size() + 1) return ar.bottom();
        return ar.letter(letters[k]);
    }
    std::uniform_int_distribution<int> conn(0, allow_modal ? 6 : 4);
    auto sub = [&]() {
        return random_formula(ar, rng, letters, depth - 1, allow_modal);
    };
    switch (conn(rng)) {
        case 0: return ar.neg(sub());
        case 1: {
            auto l = sub();
            return ar.conj(l, sub());
        }
        case 2: {
            auto l = sub();
            return ar.disj(l, sub());
        }
        case 3: {
            auto l = sub();
            return ar.implies(l, sub());
        }
        case 4: {
            auto l = sub();
            return ar.iff(l, sub());
        }
        case 5: return ar.diamond(sub());
        default: return ar.box(sub());
    }
}

// A valid frame-kind gluing spec with powerset fields. The shared
// structure is the subframe on a random up-closed subset of part 0;
// later parts extend a copy of it with worlds that only point inward,
// so every image stays open and carries the shared relation.
inline topos4::GluingSpec random_gluing_spec(std::mt19937_64& rng,
                                             size_t max_core,
                                             size_t max_extra,
                                             size_t n_parts) {
    using namespace topos4;
    std::uniform_int_distribution<size_t> core_size(1, max_core);
    FiniteFrame p0 = random_preorder(rng, core_size(rng));

    std::uniform_int_distribution<size_t> pickw(0, p0.n - 1);
    Subset seed(p0.n);
    seed.set(pickw(rng));
    std::bernoulli_distribution more(0.3);
    for (size_t w = 0; w < p0.n; ++w) {
        if (more(rng)) seed.set(w);
    }
    std::vector<size_t> core = elements(image(p0, seed));
    const size_t k = core.size();

    FiniteFrame sh;
    sh.n = k;
    sh.rel.assign(k, Subset(k));
    for (size_t a = 0; a < k; ++a) {
        for (size_t b = 0; b < k; ++b) {
            if (p0.related(core[a], core[b])) sh.rel[a].set(b);
        }
    }

    GluingSpec spec;
    spec.shared = general_frame_powerset(sh);
    spec.parts.push_back(general_frame_powerset(p0));
    spec.embeddings.push_back(core);

    std::uniform_int_distribution<size_t> extra_size(0, max_extra);
    std::bernoulli_distribution edge(0.4);
    for (size_t p = 1; p < n_parts; ++p) {
        size_t m = extra_size(rng);
        FiniteFrame f;
        f.n = k + m;
        f.rel.assign(f.n, Subset(f.n));
        for (size_t a = 0; a < k; ++a) {
            for (size_t b = 0; b < k; ++b) {
                if (sh.rel[a].test(b)) f.rel[a].set(b);
            }
        }
        for (size_t u = 0; u < m; ++u) {
            f.rel[k + u].set(k + u);
            for (size_t v = 0; v < m; ++v) {
                if (u != v && edge(rng)) f.rel[k + u].set(k + v);
            }
            for (size_t b = 0; b < k; ++b) {
                if (edge(rng)) f.rel[k + u].set(b);
            }
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (size_t w = 0; w < f.n; ++w) {
                for (size_t v : elements(f.rel[w])) {
                    if (!f.rel[v].is_subset_of(f.rel[w])) {
                        f.rel[w] |= f.rel[v];
                        changed = true;
                    }
                }
            }
        }
        spec.parts.push_back(general_frame_powerset(f));
        std::vector<size_t> e(k);
        for (size_t y = 0; y < k; ++y) e[y] = y;
        spec.embeddings.push_back(std::move(e));
    }
    return spec;
}

}  // namespace testgen
