#pragma once

#include "liejet/filtration.hpp"
#include "liejet/linalg.hpp"
#include "liejet/tensor_module.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace liejet {

// Exponent vector a over the ordered n_- coordinates of the big cell.
using JetExponents = std::vector<int>;

// Symbolic Taylor data of the orbit map: the coefficient of t^a in
// exp(sum_a t_a f_a) v is  w_a = (prod a_i!)^{-1} f_1^{a_1}...f_D^{a_D} v,
// computed by the recursion w_{a+e_i} = f_i w_a / (a_i + 1) over the first
// coordinate of a. The action is nilpotent so the expansion is finite.
class BigCellExpansion {
   public:
    BigCellExpansion(const Module& mod, int degree_cap, bool keep_coefficients = true,
                     std::vector<int> order = {})
        : mod_(&mod), degree_cap_(degree_cap), keep_(keep_coefficients) {
        if (degree_cap < 1) throw std::invalid_argument("expansion degree cap must be >= 1");
        for (long li : mod.wt.l)
            if (li < 1)
                throw std::invalid_argument(
                    "big cell expansion requires l_i >= 1 (very ample range)");
        const std::size_t D = mod.par.basis_n_minus.size();
        if (order.empty()) {
            order.resize(D);
            for (std::size_t i = 0; i < D; ++i) order[i] = static_cast<int>(i);
        }
        if (order.size() != D) throw std::invalid_argument("order must permute the n_- basis");
        order_ = order;
        build();
    }

    int degree_cap() const { return degree_cap_; }
    std::int64_t D() const { return static_cast<std::int64_t>(order_.size()); }

    // Cumulative rank of {w_a : |a| <= k}.
    std::int64_t rank_at(int k) const {
        if (k < 0 || k > degree_cap_)
            throw std::invalid_argument("taylor rank degree outside expansion cap");
        return cumulative_rank_[static_cast<std::size_t>(k)];
    }

    // Torus weight multiset of span{w_a : |a| <= k}, keyed by ambient content.
    const std::map<std::vector<int>, std::int64_t>& weight_multiset_at(int k) const {
        if (k < 0 || k > degree_cap_)
            throw std::invalid_argument("degree outside expansion cap");
        return weight_multisets_[static_cast<std::size_t>(k)];
    }

    // Coefficient w_a; absent entries are zero. Only available when the
    // expansion was built with keep_coefficients.
    const RatVec* coefficient(const JetExponents& a) const {
        if (!keep_) throw std::logic_error("expansion was built without stored coefficients");
        int d = 0;
        for (int x : a) d += x;
        if (d > degree_cap_) throw std::invalid_argument("degree outside expansion cap");
        const auto& layer = by_degree_[static_cast<std::size_t>(d)];
        auto it = layer.find(a);
        return it == layer.end() ? nullptr : &it->second;
    }

    const std::map<JetExponents, RatVec>& layer(int d) const {
        if (!keep_) throw std::logic_error("expansion was built without stored coefficients");
        return by_degree_.at(static_cast<std::size_t>(d));
    }

   private:
    void build() {
        const std::size_t D = order_.size();
        std::vector<ActionColumns> act;
        act.reserve(D);
        for (std::size_t i = 0; i < D; ++i)
            act.emplace_back(mod_->space, mod_->par.basis_n_minus[static_cast<std::size_t>(order_[i])]);

        BucketedSpan acc(mod_->space.dim());
        by_degree_.assign(static_cast<std::size_t>(degree_cap_) + 1, {});
        by_degree_[0][JetExponents(D, 0)] = mod_->hwv;
        acc.insert(mod_->space.content(mod_->hwv.leading_index()), mod_->hwv);
        cumulative_rank_.push_back(acc.rank());
        weight_multisets_.push_back(acc.rank_per_key());

        for (int d = 1; d <= degree_cap_; ++d) {
            const auto& prev = by_degree_[static_cast<std::size_t>(d - 1)];
            auto& cur = by_degree_[static_cast<std::size_t>(d)];
            for (const auto& [a, wa] : prev) {
                std::size_t first = 0;
                while (first < D && a[first] == 0) ++first;
                for (std::size_t i = 0; i <= first && i < D; ++i) {
                    JetExponents b = a;
                    ++b[i];
                    RatVec wb = act[i].apply(wa);
                    if (wb.is_zero()) continue;
                    if (b[i] > 1) wb = scaled(wb, Rat(1, b[i]));
                    acc.insert(mod_->space.content(wb.leading_index()), wb);
                    cur.emplace(std::move(b), std::move(wb));
                }
            }
            cumulative_rank_.push_back(acc.rank());
            weight_multisets_.push_back(acc.rank_per_key());
            if (!keep_ && d >= 1) by_degree_[static_cast<std::size_t>(d - 1)].clear();
            if (cur.empty()) {
                // nilpotency exhausted; ranks stay constant
                for (int rest = d + 1; rest <= degree_cap_; ++rest) {
                    cumulative_rank_.push_back(acc.rank());
                    weight_multisets_.push_back(acc.rank_per_key());
                }
                break;
            }
        }
        if (!keep_) by_degree_.back().clear();
    }

    const Module* mod_;
    int degree_cap_;
    bool keep_;
    std::vector<int> order_;
    std::vector<std::map<JetExponents, RatVec>> by_degree_;
    std::vector<std::int64_t> cumulative_rank_;
    std::vector<std::map<std::vector<int>, std::int64_t>> weight_multisets_;
};

inline BigCellExpansion expand_orbit(const Module& mod, int degree_cap,
                                     bool keep_coefficients = true,
                                     std::vector<int> order = {}) {
    return BigCellExpansion(mod, degree_cap, keep_coefficients, std::move(order));
}

inline std::int64_t taylor_rank(const BigCellExpansion& exp, int k) { return exp.rank_at(k); }

// dim of the jet fiber complement: dim V - rank of the degree-k Taylor map.
inline std::int64_t vanishing_sections_dim(const Module& mod, const BigCellExpansion& exp,
                                           int k) {
    return mod.dim() - exp.rank_at(k);
}

inline bool verify_jet_dimension(const Module& mod, const BigCellExpansion& exp, int k) {
    return exp.rank_at(k) == filtration_dim(mod, k);
}

// Weight-space dimensions of the span of a vector family, keyed by the
// H_1..H_{N-1} eigenvalue tuple.
inline std::map<std::vector<long>, std::int64_t> torus_weight_multiset(
    const TensorSpace& space, const std::vector<RatVec>& vectors) {
    BucketedSpan sp(space.dim());
    for (const auto& v : vectors) {
        if (v.is_zero()) continue;
        sp.insert(space.content(v.leading_index()), v);
    }
    std::map<std::vector<long>, std::int64_t> out;
    for (const auto& [content, r] : sp.rank_per_key()) {
        std::vector<long> w(content.size() - 1);
        for (std::size_t j = 0; j + 1 < content.size(); ++j)
            w[j] = content[j] - content[j + 1];
        out[w] += r;
    }
    return out;
}

inline std::map<std::vector<long>, std::int64_t> content_to_cartan(
    const std::map<std::vector<int>, std::int64_t>& m) {
    std::map<std::vector<long>, std::int64_t> out;
    for (const auto& [content, r] : m) {
        std::vector<long> w(content.size() - 1);
        for (std::size_t j = 0; j + 1 < content.size(); ++j)
            w[j] = content[j] - content[j + 1];
        out[w] += r;
    }
    return out;
}

}  // namespace liejet
