#pragma once

#include "liejet/enveloping.hpp"
#include "liejet/lie.hpp"
#include "liejet/linalg.hpp"
#include "liejet/tensor_module.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace liejet {

// dim U^k(g)v predicted by the PBW count: binom(D+k, D).
inline Int dimension_formula(std::int64_t D, int k) {
    return binomial(static_cast<long>(D) + k, k);
}

// dim U^k(g)v, read off the generation rounds; constant beyond N(lambda).
inline std::int64_t filtration_dim(const Module& mod, int k) {
    if (k < 0) throw std::invalid_argument("negative filtration degree");
    if (k < static_cast<int>(mod.round_dims.size()))
        return mod.round_dims[static_cast<std::size_t>(k)];
    return mod.round_dims.back();
}

inline int filtration_length(const Module& mod) { return mod.n_lambda; }

inline std::map<std::vector<int>, std::int64_t> filtration_weight_multiset(const Module& mod,
                                                                           int k) {
    if (k < 0) throw std::invalid_argument("negative filtration degree");
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(k),
                                          mod.round_weight_multisets.size() - 1);
    return mod.round_weight_multisets[i];
}

// Images of the ordered monomials v_1^{a_1}...v_D^{a_D} (v), sum a_i <= k, in
// the fixed n_- order, with an exact independence check.
struct PBWImageSet {
    std::vector<RatVec> vectors;  // in monomial enumeration order, zeros included
    std::int64_t count = 0;
    std::int64_t rank = 0;
    bool independent = false;
};

inline PBWImageSet pbw_basis_vectors(const Module& mod, const ModuleActions& act, int k) {
    if (k < 1) throw std::invalid_argument("pbw_basis_vectors needs k >= 1");
    const std::int64_t D = mod.par.D();
    MonomialIndex idx = filtration_monomials(static_cast<int>(D), k);
    PBWImageSet out;
    out.count = idx.size();
    BucketedSpan sp(mod.space.dim());
    for (const auto& e : idx.monos) {
        RatVec w = act.apply_word(exponents_word(e), mod.hwv);
        if (!w.is_zero()) {
            if (sp.insert(mod.space.content(w.leading_index()), w)) ++out.rank;
        }
        out.vectors.push_back(std::move(w));
    }
    out.independent = (out.rank == out.count);
    return out;
}

// Rank of the span of all degree <= k monomials in the *full* basis of g
// applied to v. Independent witness that U^k(g)v = U^k(n_-)v.
inline std::int64_t full_basis_span_dim(const Module& mod, const ModuleActions& act, int k) {
    MonomialIndex idx = filtration_monomials(mod.par.dim_g(), k);
    BucketedSpan sp(mod.space.dim());
    for (const auto& e : idx.monos) {
        RatVec w = act.apply_word(exponents_word(e), mod.hwv);
        if (!w.is_zero()) sp.insert(mod.space.content(w.leading_index()), w);
    }
    return sp.rank();
}

// Kernel of the action map U^k(g) -> V, u -> u(v), in PBW coordinates.
// This is ann^k(v, lambda) computed directly from the module.
inline Subspace kernel_of_action(const Module& mod, const ModuleActions& act,
                                 const MonomialIndex& coords) {
    KernelTracker tracker(coords.size(), mod.space.dim());
    for (const auto& e : coords.monos)
        tracker.feed(act.apply_word(exponents_word(e), mod.hwv));
    return tracker.kernel();
}

struct AnnihilatorDims {
    std::int64_t env_dim = 0;   // dim U^k(g)
    std::int64_t module_dim = 0;  // dim U^k(g)v
    std::int64_t ann_dim = 0;   // env_dim - module_dim
    std::optional<std::int64_t> char_rank;
    std::optional<std::int64_t> dixmier_rank;
    std::optional<bool> dixmier_equals_char;
    std::optional<bool> ann_equals_char;  // action-map kernel vs char span
};

// Rank-nullity dimensions plus, when the enveloping-side spans are computed,
// exact subspace comparisons between the Verma-side annihilator, the
// character ideal and the action-map kernel.
inline AnnihilatorDims annihilator_dimensions(const Module& mod, const ModuleActions& act,
                                              const EnvAlgebra* alg, int k,
                                              std::int64_t max_env_span_dim) {
    AnnihilatorDims out;
    out.env_dim = binomial_i64(mod.par.dim_g() + k, k);
    out.module_dim = filtration_dim(mod, k);
    out.ann_dim = out.env_dim - out.module_dim;
    if (alg == nullptr || k < 1 || k > alg->degree_cap() || out.env_dim > max_env_span_dim)
        return out;
    MonomialIndex coords = filtration_monomials(alg->dim_g(), k);
    Subspace chr = character_ideal_span(*alg, mod.wt, k, coords);
    Subspace dix = dixmier_annihilator_span(*alg, mod.wt, k, coords);
    Subspace ker = kernel_of_action(mod, act, coords);
    out.char_rank = chr.rank();
    out.dixmier_rank = dix.rank();
    out.dixmier_equals_char = (dix == chr);
    out.ann_equals_char = (ker == chr);
    return out;
}

struct DirectSumResult {
    std::vector<std::int64_t> dims_sum;                  // dim U^k(g)W, k = 0..
    std::vector<std::vector<std::int64_t>> dims_parts;   // per summand
    int n_lambda = 0;

    std::int64_t part_dim(std::size_t i, int k) const {
        const auto& d = dims_parts[i];
        return d[std::min<std::size_t>(static_cast<std::size_t>(k), d.size() - 1)];
    }

    std::int64_t sum_dim(int k) const {
        return dims_sum[std::min<std::size_t>(static_cast<std::size_t>(k), dims_sum.size() - 1)];
    }

    bool additive_at(int k) const {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < dims_parts.size(); ++i) s += part_dim(i, k);
        return sum_dim(k) == s;
    }
};

// Filtration of U^k(g)W for W spanned by the highest weight vectors of
// several modules over the same flag, computed inside the direct-sum
// realization. Buckets are keyed by torus weight since the summands'
// content totals differ.
inline DirectSumResult direct_sum_filtration(const FlagType& flag,
                                             const std::vector<Weight>& weights,
                                             std::int64_t ambient_cap = 200000) {
    if (weights.empty()) throw std::invalid_argument("need at least one summand");
    DirectSumResult out;
    std::vector<Module> parts;
    parts.reserve(weights.size());
    for (const auto& w : weights) {
        parts.push_back(generate_module(flag, w, ambient_cap));
        out.dims_parts.push_back(parts.back().round_dims);
    }

    std::vector<std::int64_t> offset(parts.size() + 1, 0);
    for (std::size_t i = 0; i < parts.size(); ++i)
        offset[i + 1] = offset[i] + parts[i].space.dim();
    const std::int64_t total = offset.back();

    const std::size_t nf = parts.front().par.basis_n_minus.size();
    std::vector<std::vector<ActionColumns>> lowering(parts.size());
    for (std::size_t p = 0; p < parts.size(); ++p)
        for (std::size_t f = 0; f < nf; ++f)
            lowering[p].emplace_back(parts[p].space, parts[p].par.basis_n_minus[f]);

    auto block_of_index = [&](std::int64_t idx) {
        std::size_t p = 0;
        while (idx >= offset[p + 1]) ++p;
        return p;
    };

    auto apply_f = [&](std::size_t f, const RatVec& v) {
        std::vector<std::pair<std::int64_t, Rat>> acc;
        // split by block, act blockwise
        std::size_t i = 0;
        while (i < v.entries.size()) {
            std::size_t p = block_of_index(v.entries[i].first);
            RatVec local(parts[p].space.dim());
            while (i < v.entries.size() && v.entries[i].first < offset[p + 1]) {
                local.entries.emplace_back(v.entries[i].first - offset[p], v.entries[i].second);
                ++i;
            }
            RatVec img = lowering[p][f].apply(local);
            for (auto& [o, c] : img.entries) acc.emplace_back(o + offset[p], std::move(c));
        }
        RatVec r(total);
        r.entries = std::move(acc);  // blockwise outputs are already sorted
        return r;
    };

    auto weight_key = [&](const RatVec& v) {
        std::int64_t idx = v.leading_index();
        std::size_t p = block_of_index(idx);
        std::vector<long> w = parts[p].space.cartan_weight(idx - offset[p]);
        return std::vector<int>(w.begin(), w.end());
    };

    BucketedSpan sp(total);
    std::vector<RatVec> frontier;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        RatVec v(total);
        v.entries.emplace_back(parts[p].space.highest_weight_index() + offset[p], Rat(1));
        const RatVec* added = sp.insert(weight_key(v), v);
        if (added) frontier.push_back(*added);
    }
    out.dims_sum.push_back(sp.rank());

    while (!frontier.empty()) {
        std::vector<RatVec> next;
        for (std::size_t f = 0; f < nf; ++f)
            for (const auto& w : frontier) {
                RatVec u = apply_f(f, w);
                if (u.is_zero()) continue;
                const RatVec* added = sp.insert(weight_key(u), u);
                if (added) next.push_back(*added);
            }
        if (next.empty()) break;
        out.dims_sum.push_back(sp.rank());
        frontier = std::move(next);
    }
    out.n_lambda = static_cast<int>(out.dims_sum.size()) - 1;
    return out;
}

}  // namespace liejet
