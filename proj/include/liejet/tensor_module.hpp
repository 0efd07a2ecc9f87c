#pragma once

#include "liejet/lie.hpp"
#include "liejet/linalg.hpp"
#include "liejet/rational.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace liejet {

// Ambient tensor space  Sym^{l_1}(wedge^{n_1} E) (x) ... (x) Sym^{l_k}(wedge^{n_k} E)
// with its canonical combinatorial basis: one factor per flag step, indexed by
// a size-l_i multiset of n_i-subsets of {0..N-1}. Basis vectors are encoded as
// a single ordinal (mixed radix over the steps).
class TensorSpace {
   public:
    TensorSpace(const FlagType& flag, const Weight& wt, std::int64_t ambient_cap)
        : flag_(flag), wt_(wt) {
        wt.check(flag);
        const int N = flag.N();
        // size the space arithmetically before materializing any table
        Int total(1);
        for (int i = 1; i <= flag.steps(); ++i) {
            long li = wt.l[static_cast<std::size_t>(i - 1)];
            if (li < 0) throw std::invalid_argument("weight coefficients must be >= 0");
            if (li == 0) continue;
            Int nsubsets = binomial(N, flag.n(i));
            if (!nsubsets.fits_slong_p() || nsubsets > ambient_cap)
                throw ResourceError("wedge power basis of step " + std::to_string(i) +
                                    " exceeds the ambient cap");
            total *= binomial(static_cast<long>(nsubsets.get_si()) + li - 1, li);
            if (total > ambient_cap)
                throw ResourceError("ambient tensor space dimension exceeds cap " +
                                    std::to_string(ambient_cap) + " (at least " +
                                    total.get_str() + " after step " + std::to_string(i) + ")");
        }
        total = 1;
        for (int i = 1; i <= flag.steps(); ++i) {
            long li = wt.l[static_cast<std::size_t>(i - 1)];
            Step st;
            st.n = flag.n(i);
            st.l = li;
            if (li > 0) enumerate_subsets(N, st.n, st.subsets);
            for (int r = 0; r < static_cast<int>(st.subsets.size()); ++r)
                st.subset_rank[st.subsets[static_cast<std::size_t>(r)]] = r;
            enumerate_multisets(static_cast<int>(st.subsets.size()), li, st.multisets);
            for (std::int64_t m = 0; m < static_cast<std::int64_t>(st.multisets.size()); ++m)
                st.multiset_pos[st.multisets[static_cast<std::size_t>(m)]] = m;
            st.content.reserve(st.multisets.size());
            for (const auto& ms : st.multisets) {
                std::vector<int> cnt(static_cast<std::size_t>(N), 0);
                for (int rank : ms)
                    for (int el : st.subsets[static_cast<std::size_t>(rank)])
                        ++cnt[static_cast<std::size_t>(el)];
                st.content.push_back(std::move(cnt));
            }
            total *= static_cast<long>(st.multisets.size());
            steps_.push_back(std::move(st));
        }
        if (total > ambient_cap)
            throw ResourceError("ambient tensor space dimension " + total.get_str() +
                                " exceeds cap " + std::to_string(ambient_cap));
        dim_ = static_cast<std::int64_t>(total.get_si());
        strides_.assign(steps_.size(), 1);
        for (int i = static_cast<int>(steps_.size()) - 2; i >= 0; --i)
            strides_[static_cast<std::size_t>(i)] =
                strides_[static_cast<std::size_t>(i + 1)] *
                static_cast<std::int64_t>(steps_[static_cast<std::size_t>(i + 1)].multisets.size());
    }

    const FlagType& flag() const { return flag_; }
    const Weight& weight() const { return wt_; }
    std::int64_t dim() const { return dim_; }

    std::vector<std::int64_t> decode(std::int64_t ordinal) const {
        std::vector<std::int64_t> out(steps_.size());
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            out[i] = ordinal / strides_[i];
            ordinal %= strides_[i];
        }
        return out;
    }

    // Occurrence count of each basis vector of E in the index.
    std::vector<int> content(std::int64_t ordinal) const {
        std::vector<int> cnt(static_cast<std::size_t>(flag_.N()), 0);
        auto parts = decode(ordinal);
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            const auto& c = steps_[i].content[static_cast<std::size_t>(parts[i])];
            for (std::size_t e = 0; e < cnt.size(); ++e) cnt[e] += c[e];
        }
        return cnt;
    }

    // Torus weight of a basis index as H_1..H_{N-1} eigenvalues.
    std::vector<long> cartan_weight(std::int64_t ordinal) const {
        auto cnt = content(ordinal);
        std::vector<long> w(cnt.size() - 1);
        for (std::size_t j = 0; j + 1 < cnt.size(); ++j) w[j] = cnt[j] - cnt[j + 1];
        return w;
    }

    // Index of v = Sym^{l_1}(wedge^{n_1} E_1) (x) ... : every subset {0..n_i-1}.
    std::int64_t highest_weight_index() const {
        std::int64_t ord = 0;
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            const Step& st = steps_[i];
            std::vector<int> ms;
            if (st.l > 0) {
                std::vector<int> first(static_cast<std::size_t>(st.n));
                for (int e = 0; e < st.n; ++e) first[static_cast<std::size_t>(e)] = e;
                ms.assign(static_cast<std::size_t>(st.l), st.subset_rank.at(first));
            }
            ord += st.multiset_pos.at(ms) * strides_[i];
        }
        return ord;
    }

    // E_{ab} (a != b) acting on a basis index by Leibniz over tensor slots,
    // symmetric factors, and wedge factors. Appends (index, integer coeff).
    void act_unit(int a, int b, std::int64_t ordinal,
                  std::vector<std::pair<std::int64_t, long>>& out) const {
        auto parts = decode(ordinal);
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            const Step& st = steps_[i];
            const auto& ms = st.multisets[static_cast<std::size_t>(parts[i])];
            for (std::size_t p = 0; p < ms.size(); ++p) {
                if (p > 0 && ms[p] == ms[p - 1]) continue;  // distinct subsets only
                long mult = 1;
                for (std::size_t q = p + 1; q < ms.size() && ms[q] == ms[p]; ++q) ++mult;
                const auto& sub = st.subsets[static_cast<std::size_t>(ms[p])];
                int sign = 0;
                std::vector<int> repl;
                if (!substitute(sub, a, b, repl, sign)) continue;
                std::vector<int> new_ms = ms;
                new_ms[p] = st.subset_rank.at(repl);
                std::sort(new_ms.begin(), new_ms.end());
                std::int64_t new_part = st.multiset_pos.at(new_ms);
                std::int64_t new_ord = ordinal + (new_part - parts[i]) * strides_[i];
                out.emplace_back(new_ord, mult * sign);
            }
        }
    }

   private:
    struct Step {
        int n = 0;
        long l = 0;
        std::vector<std::vector<int>> subsets;
        std::map<std::vector<int>, int> subset_rank;
        std::vector<std::vector<int>> multisets;  // nondecreasing rank vectors
        std::map<std::vector<int>, std::int64_t> multiset_pos;
        std::vector<std::vector<int>> content;
    };

    static void enumerate_subsets(int N, int n, std::vector<std::vector<int>>& out) {
        std::vector<int> cur;
        cur.reserve(static_cast<std::size_t>(n));
        enumerate_subsets_rec(N, n, 0, cur, out);
    }

    static void enumerate_subsets_rec(int N, int n, int start, std::vector<int>& cur,
                                      std::vector<std::vector<int>>& out) {
        if (static_cast<int>(cur.size()) == n) {
            out.push_back(cur);
            return;
        }
        for (int e = start; e <= N - (n - static_cast<int>(cur.size())); ++e) {
            cur.push_back(e);
            enumerate_subsets_rec(N, n, e + 1, cur, out);
            cur.pop_back();
        }
    }

    static void enumerate_multisets(int S, long l, std::vector<std::vector<int>>& out) {
        std::vector<int> cur;
        cur.reserve(static_cast<std::size_t>(l));
        enumerate_multisets_rec(S, l, 0, cur, out);
    }

    static void enumerate_multisets_rec(int S, long l, int start, std::vector<int>& cur,
                                        std::vector<std::vector<int>>& out) {
        if (static_cast<long>(cur.size()) == l) {
            out.push_back(cur);
            return;
        }
        for (int r = start; r < S; ++r) {
            cur.push_back(r);
            enumerate_multisets_rec(S, l, r, cur, out);
            cur.pop_back();
        }
    }

    // e_b -> e_a inside a wedge factor; false when the action kills the term.
    static bool substitute(const std::vector<int>& sub, int a, int b, std::vector<int>& out,
                           int& sign) {
        bool has_b = false, has_a = false;
        for (int e : sub) {
            has_b |= (e == b);
            has_a |= (e == a);
        }
        if (!has_b || has_a) return false;
        int between = 0;
        const int lo = std::min(a, b), hi = std::max(a, b);
        out.clear();
        out.reserve(sub.size());
        for (int e : sub) {
            if (e == b) continue;
            if (e > lo && e < hi) ++between;
            out.push_back(e);
        }
        out.push_back(a);
        std::sort(out.begin(), out.end());
        sign = (between % 2 == 0) ? 1 : -1;
        return true;
    }

    FlagType flag_;
    Weight wt_;
    std::vector<Step> steps_;
    std::vector<std::int64_t> strides_;
    std::int64_t dim_ = 0;
};

inline RatVec highest_weight_vector(const TensorSpace& space) {
    return unit_vector(space.dim(), space.highest_weight_index());
}

// Action of an arbitrary trace-zero matrix on the ambient space, with
// memoized per-basis-index columns. Diagonal entries act by content count.
class ActionColumns {
   public:
    ActionColumns(const TensorSpace& space, const LieElement& g) : space_(&space), g_(g) {
        if (g.size() != space.flag().N()) throw std::invalid_argument("size mismatch");
    }

    const std::vector<std::pair<std::int64_t, Rat>>& column(std::int64_t ordinal) const {
        auto it = cols_.find(ordinal);
        if (it != cols_.end()) return it->second;
        std::vector<std::pair<std::int64_t, Rat>> col;
        std::vector<std::pair<std::int64_t, long>> terms;
        for (const auto& [rc, val] : g_.entries()) {
            auto [r, c] = rc;
            if (r == c) {
                auto cnt = space_->content(ordinal);
                if (cnt[static_cast<std::size_t>(r)] != 0)
                    col.emplace_back(ordinal, val * cnt[static_cast<std::size_t>(r)]);
            } else {
                terms.clear();
                space_->act_unit(r, c, ordinal, terms);
                for (const auto& [o, k] : terms) col.emplace_back(o, val * k);
            }
        }
        std::sort(col.begin(), col.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<std::pair<std::int64_t, Rat>> merged;
        for (auto& [o, v] : col) {
            if (!merged.empty() && merged.back().first == o)
                merged.back().second += v;
            else
                merged.emplace_back(o, std::move(v));
        }
        std::erase_if(merged, [](const auto& p) { return p.second == 0; });
        return cols_.emplace(ordinal, std::move(merged)).first->second;
    }

    RatVec apply(const RatVec& v) const {
        std::vector<std::pair<std::int64_t, Rat>> acc;
        for (const auto& [o, c] : v.entries) {
            for (const auto& [o2, w] : column(o)) acc.emplace_back(o2, c * w);
        }
        std::sort(acc.begin(), acc.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        RatVec r(v.dim);
        for (auto& [o, c] : acc) {
            if (!r.entries.empty() && r.entries.back().first == o)
                r.entries.back().second += c;
            else
                r.entries.emplace_back(o, std::move(c));
        }
        std::erase_if(r.entries, [](const auto& p) { return p.second == 0; });
        return r;
    }

   private:
    const TensorSpace* space_;
    LieElement g_;
    mutable std::unordered_map<std::int64_t, std::vector<std::pair<std::int64_t, Rat>>> cols_;
};

inline RatVec ambient_action(const TensorSpace& space, const LieElement& g, const RatVec& v) {
    return ActionColumns(space, g).apply(v);
}

// Span organized by torus weight. Every vector produced by applying
// root vectors to a weight vector is homogeneous, so rank computations
// decompose weight by weight.
class BucketedSpan {
   public:
    explicit BucketedSpan(std::int64_t ambient) : ambient_(ambient) {}

    // Returns the reduced residual row if the rank grew, nullptr otherwise.
    const RatVec* insert(const std::vector<int>& key, const RatVec& v) {
        auto [it, fresh] = buckets_.try_emplace(key, ambient_);
        Subspace& s = it->second;
        RatVec w = s.reduce(v);
        if (w.is_zero()) return nullptr;
        last_ = w;
        s.insert(w);
        ++rank_;
        return &last_;
    }

    bool contains(const std::vector<int>& key, const RatVec& v) const {
        auto it = buckets_.find(key);
        if (it == buckets_.end()) return v.is_zero();
        return it->second.contains(v);
    }

    std::int64_t rank() const { return rank_; }

    std::map<std::vector<int>, std::int64_t> rank_per_key() const {
        std::map<std::vector<int>, std::int64_t> out;
        for (const auto& [k, s] : buckets_)
            if (s.rank() > 0) out[k] = s.rank();
        return out;
    }

    // All echelon rows, bucket by bucket in key order.
    std::vector<RatVec> rows() const {
        std::vector<RatVec> out;
        out.reserve(static_cast<std::size_t>(rank_));
        for (const auto& [k, s] : buckets_)
            for (const auto& r : s.rows()) out.push_back(r);
        return out;
    }

   private:
    std::int64_t ambient_;
    std::map<std::vector<int>, Subspace> buckets_;
    std::int64_t rank_ = 0;
    RatVec last_;
};

// Weyl dimension formula for type A from the partition coordinates of the
// highest weight; serves as the independent dimension oracle.
inline Int weyl_dimension(const FlagType& flag, const Weight& wt) {
    wt.check(flag);
    const int N = flag.N();
    std::vector<long> a(static_cast<std::size_t>(N), 0);
    for (int i = 1; i <= flag.steps(); ++i)
        for (int j = 0; j < flag.n(i); ++j) a[static_cast<std::size_t>(j)] += wt.l[static_cast<std::size_t>(i - 1)];
    Int num(1), den(1);
    for (int u = 0; u < N; ++u)
        for (int v = u + 1; v < N; ++v) {
            num *= a[static_cast<std::size_t>(u)] - a[static_cast<std::size_t>(v)] + (v - u);
            den *= (v - u);
        }
    return num / den;
}

// The module V(lambda) generated from the highest weight vector inside the
// ambient tensor space, together with the per-degree span data produced while
// generating it: round_dims[k] = dim U^k(g)v.
struct Module {
    FlagType flag;
    Weight wt;
    ParabolicDecomposition par;
    TensorSpace space;
    RatVec hwv;
    BucketedSpan basis;
    std::vector<std::int64_t> round_dims;
    std::vector<std::map<std::vector<int>, std::int64_t>> round_weight_multisets;
    int n_lambda = 0;

    std::int64_t dim() const { return basis.rank(); }

    std::vector<int> content_of(const RatVec& v) const {
        if (v.is_zero()) throw std::invalid_argument("zero vector has no weight");
        return space.content(v.leading_index());
    }
};

inline Module generate_module(const FlagType& flag, const Weight& wt,
                              std::int64_t ambient_cap = 200000) {
    ParabolicDecomposition par = parabolic(flag);
    TensorSpace space(flag, wt, ambient_cap);
    const std::int64_t dim = space.dim();
    RatVec v = highest_weight_vector(space);
    Module mod{flag, wt, std::move(par), std::move(space), v, BucketedSpan(dim), {}, {}, 0};

    std::vector<ActionColumns> lowering;
    lowering.reserve(mod.par.basis_n_minus.size());
    for (const auto& f : mod.par.basis_n_minus) lowering.emplace_back(mod.space, f);

    std::vector<RatVec> frontier;
    mod.basis.insert(mod.space.content(v.leading_index()), v);
    frontier.push_back(v);
    mod.round_dims.push_back(1);
    mod.round_weight_multisets.push_back(mod.basis.rank_per_key());

    while (!frontier.empty()) {
        std::vector<RatVec> next;
        for (const auto& act : lowering) {
            for (const auto& w : frontier) {
                RatVec u = act.apply(w);
                if (u.is_zero()) continue;
                const RatVec* added = mod.basis.insert(mod.space.content(u.leading_index()), u);
                if (added) next.push_back(*added);
            }
        }
        if (next.empty()) break;
        mod.round_dims.push_back(mod.basis.rank());
        mod.round_weight_multisets.push_back(mod.basis.rank_per_key());
        frontier = std::move(next);
    }
    mod.n_lambda = static_cast<int>(mod.round_dims.size()) - 1;
    return mod;
}

// n_+ v = 0 and H_j v = lambda(H_j) v.
inline bool check_highest_weight(const TensorSpace& space, const Weight& wt, const RatVec& v) {
    const FlagType& flag = space.flag();
    const int N = flag.N();
    for (int r = 0; r < N; ++r)
        for (int c = r + 1; c < N; ++c) {
            if (!ambient_action(space, LieElement::matrix_unit(N, r, c), v).is_zero())
                return false;
        }
    for (int j = 0; j < N - 1; ++j) {
        RatVec hv = ambient_action(space, LieElement::cartan(N, j), v);
        RatVec expect = scaled(v, Rat(wt.on_cartan(flag, j)));
        if (!(hv == expect)) return false;
    }
    return true;
}

// Memoized action columns for the global basis of a module; words act with
// the rightmost factor applied first.
class ModuleActions {
   public:
    explicit ModuleActions(const Module& m) : mod_(&m) {}

    const ActionColumns& of(int gidx) const {
        auto it = cache_.find(gidx);
        if (it == cache_.end())
            it = cache_
                     .emplace(gidx, ActionColumns(mod_->space,
                                                  mod_->par.global_basis[static_cast<std::size_t>(gidx)]))
                     .first;
        return it->second;
    }

    RatVec apply_word(const std::vector<int>& word, RatVec v) const {
        for (auto it = word.rbegin(); it != word.rend() && !v.is_zero(); ++it)
            v = of(*it).apply(v);
        return v;
    }

   private:
    const Module* mod_;
    mutable std::map<int, ActionColumns> cache_;
};

}  // namespace liejet
