#pragma once

#include "liejet/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liejet {

// Composition d = (d_1,...,d_{k+1}) of N describing a flag type. Indices into
// d are 1-based in the classical notation; accessors below keep that
// convention for n_i while matrix rows/columns are 0-based.
class FlagType {
   public:
    explicit FlagType(std::vector<int> d) : d_(std::move(d)) {
        if (d_.empty()) throw std::invalid_argument("flag type must have at least one part");
        for (int di : d_)
            if (di < 1) throw std::invalid_argument("flag type parts must be >= 1");
        prefix_.resize(d_.size() + 1, 0);
        std::partial_sum(d_.begin(), d_.end(), prefix_.begin() + 1);
    }

    int N() const { return prefix_.back(); }
    int steps() const { return static_cast<int>(d_.size()) - 1; }  // k
    const std::vector<int>& parts() const { return d_; }

    // n_i = d_1 + ... + d_i for i = 1..k+1.
    int n(int i) const { return prefix_.at(static_cast<std::size_t>(i)); }

    // 1-based block index containing 0-based row r.
    int block_of(int r) const {
        for (std::size_t i = 1; i < prefix_.size(); ++i)
            if (r < prefix_[i]) return static_cast<int>(i);
        throw std::out_of_range("row outside matrix");
    }

    // D = sum_{i<j} d_i d_j = dim of the block strictly-lower part.
    std::int64_t codim() const {
        std::int64_t D = 0;
        for (std::size_t i = 0; i < d_.size(); ++i)
            for (std::size_t j = i + 1; j < d_.size(); ++j)
                D += static_cast<std::int64_t>(d_[i]) * d_[j];
        return D;
    }

    bool operator==(const FlagType& o) const { return d_ == o.d_; }

   private:
    std::vector<int> d_;
    std::vector<int> prefix_;
};

// Trace-zero N x N matrix with exact rational entries, stored sparsely.
class LieElement {
   public:
    explicit LieElement(int n) : n_(n) {
        if (n < 2) throw std::invalid_argument("matrix size must be >= 2");
    }

    static LieElement matrix_unit(int n, int r, int c) {
        LieElement x(n);
        if (r == c) throw std::invalid_argument("matrix unit must be off-diagonal");
        x.set(r, c, Rat(1));
        return x;
    }

    // H_j = E_{j,j} - E_{j+1,j+1}, 0-based j in [0, n-2].
    static LieElement cartan(int n, int j) {
        LieElement x(n);
        if (j < 0 || j >= n - 1) throw std::invalid_argument("cartan index out of range");
        x.set(j, j, Rat(1));
        x.set(j + 1, j + 1, Rat(-1));
        return x;
    }

    static LieElement diagonal(const std::vector<Rat>& t) {
        LieElement x(static_cast<int>(t.size()));
        Rat tr(0);
        for (const Rat& v : t) tr += v;
        if (tr != 0) throw std::invalid_argument("diagonal not trace-zero");
        for (int i = 0; i < static_cast<int>(t.size()); ++i) x.set(i, i, t[i]);
        return x;
    }

    int size() const { return n_; }
    bool is_zero() const { return e_.empty(); }
    const std::map<std::pair<int, int>, Rat>& entries() const { return e_; }

    Rat get(int r, int c) const {
        auto it = e_.find({r, c});
        return it == e_.end() ? Rat(0) : it->second;
    }

    void set(int r, int c, const Rat& v) {
        if (r < 0 || r >= n_ || c < 0 || c >= n_)
            throw std::out_of_range("matrix index out of range");
        if (v == 0)
            e_.erase({r, c});
        else
            e_[{r, c}] = v;
    }

    Rat trace() const {
        Rat t(0);
        for (const auto& [rc, v] : e_)
            if (rc.first == rc.second) t += v;
        return t;
    }

    LieElement& operator+=(const LieElement& o) {
        check_same(o);
        for (const auto& [rc, v] : o.e_) set(rc.first, rc.second, get(rc.first, rc.second) + v);
        return *this;
    }

    LieElement& operator*=(const Rat& c) {
        if (c == 0) {
            e_.clear();
            return *this;
        }
        for (auto& [rc, v] : e_) v *= c;
        return *this;
    }

    friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
    friend LieElement operator*(const Rat& c, LieElement a) { return a *= c; }
    friend LieElement operator-(LieElement a, const LieElement& b) {
        LieElement nb = b;
        nb *= Rat(-1);
        return a += nb;
    }

    bool operator==(const LieElement& o) const { return n_ == o.n_ && e_ == o.e_; }

    // Matrix product; intermediate step for the bracket.
    LieElement mult(const LieElement& o) const {
        check_same(o);
        LieElement r(n_);
        std::map<int, std::vector<std::pair<int, const Rat*>>> rows_of_o;
        for (const auto& [rc, v] : o.e_) rows_of_o[rc.first].emplace_back(rc.second, &v);
        for (const auto& [rc, v] : e_) {
            auto it = rows_of_o.find(rc.second);
            if (it == rows_of_o.end()) continue;
            for (const auto& [col, w] : it->second)
                r.set(rc.first, col, r.get(rc.first, col) + v * *w);
        }
        return r;
    }

    void check_same(const LieElement& o) const {
        if (n_ != o.n_) throw std::invalid_argument("matrix size mismatch");
    }

   private:
    int n_;
    std::map<std::pair<int, int>, Rat> e_;
};

inline LieElement bracket(const LieElement& a, const LieElement& b) {
    return a.mult(b) - b.mult(a);
}

// Chevalley-style basis of sl_N: matrix units E_{rc}, r != c, row-major,
// followed by H_1..H_{N-1}.
inline std::vector<LieElement> build_sl(int N) {
    if (N < 2) throw std::invalid_argument("sl_N requires N >= 2");
    std::vector<LieElement> basis;
    basis.reserve(static_cast<std::size_t>(N) * N - 1);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            if (r != c) basis.push_back(LieElement::matrix_unit(N, r, c));
    for (int j = 0; j < N - 1; ++j) basis.push_back(LieElement::cartan(N, j));
    return basis;
}

// Highest weight lambda = sum_i l_i * omega_{n_i}, stored by its coefficient
// list against the flag's fundamental weights.
struct Weight {
    std::vector<long> l;

    Weight() = default;
    explicit Weight(std::vector<long> coeffs) : l(std::move(coeffs)) {}

    long min_l() const {
        long m = l.empty() ? 0 : l.front();
        for (long x : l) m = std::min(m, x);
        return m;
    }

    // lambda(H_j) for 0-based j: equals l_i when j+1 == n_i, else 0.
    long on_cartan(const FlagType& flag, int j) const {
        check(flag);
        for (int i = 1; i <= flag.steps(); ++i)
            if (flag.n(i) == j + 1) return l[static_cast<std::size_t>(i - 1)];
        return 0;
    }

    // lambda evaluated on a diagonal matrix: sum_i l_i (t_1 + ... + t_{n_i}).
    Rat on_diagonal(const FlagType& flag, const LieElement& x) const {
        check(flag);
        Rat total(0);
        for (int i = 1; i <= flag.steps(); ++i) {
            Rat partial(0);
            for (int r = 0; r < flag.n(i); ++r) partial += x.get(r, r);
            total += Rat(l[static_cast<std::size_t>(i - 1)]) * partial;
        }
        return total;
    }

    void check(const FlagType& flag) const {
        if (static_cast<int>(l.size()) != flag.steps())
            throw std::invalid_argument("weight length must equal number of flag steps");
    }
};

inline bool in_parabolic(const FlagType& flag, const LieElement& x) {
    for (const auto& [rc, v] : x.entries())
        if (flag.block_of(rc.first) > flag.block_of(rc.second)) return false;
    return true;
}

// Fixed global ordering of the sl_N basis adapted to the flag:
//   [0, D)            matrix units spanning the block strictly-lower part,
//                     grouped by block pair (lexicographic), row-major inside;
//   [D, D+N-1)        H_1..H_{N-1};
//   [D+N-1, N^2-1)    remaining off-diagonal units of the parabolic, row-major.
struct ParabolicDecomposition {
    FlagType flag;
    std::vector<LieElement> global_basis;
    std::vector<LieElement> basis_n_minus;  // size D
    std::vector<LieElement> basis_h;        // size N-1
    std::vector<LieElement> basis_p;        // h then parabolic units
    std::vector<LieElement> basis_n_plus;   // strictly upper units (Cartan n_+)

    // For unit basis elements, the (row, col) pair; (-1, j) marks H_j.
    std::vector<std::pair<int, int>> unit_of;
    std::map<std::pair<int, int>, int> index_of_unit;  // (row,col) -> global index
    int h_offset = 0;                                  // global index of H_1

    int dim_g() const { return static_cast<int>(global_basis.size()); }
    std::int64_t D() const { return static_cast<std::int64_t>(basis_n_minus.size()); }

    int index_of_cartan(int j) const { return h_offset + j; }

    // Index of the lowering unit E_{i+1,i} for simple root i (0-based).
    int index_of_lowering(int i) const { return index_of_unit.at({i + 1, i}); }

    // Global indices of all strictly lower triangular units (Cartan g_-).
    std::vector<int> lower_unit_indices() const {
        std::vector<int> idx;
        for (int g = 0; g < dim_g(); ++g) {
            auto [r, c] = unit_of[static_cast<std::size_t>(g)];
            if (r >= 0 && r > c) idx.push_back(g);
        }
        return idx;
    }
};

inline ParabolicDecomposition parabolic(const FlagType& flag) {
    const int N = flag.N();
    ParabolicDecomposition par{flag, {}, {}, {}, {}, {}, {}, {}, 0};

    auto push_unit = [&](int r, int c) {
        par.index_of_unit[{r, c}] = static_cast<int>(par.global_basis.size());
        par.global_basis.push_back(LieElement::matrix_unit(N, r, c));
        par.unit_of.emplace_back(r, c);
    };

    // n_- block by block pair, row-major within each pair.
    const int nblocks = flag.steps() + 1;
    for (int p = 1; p <= nblocks; ++p)
        for (int q = p + 1; q <= nblocks; ++q)
            for (int r = flag.n(q - 1); r < flag.n(q); ++r)
                for (int c = flag.n(p - 1); c < flag.n(p); ++c) {
                    push_unit(r, c);
                    par.basis_n_minus.push_back(par.global_basis.back());
                }

    par.h_offset = static_cast<int>(par.global_basis.size());
    for (int j = 0; j < N - 1; ++j) {
        par.global_basis.push_back(LieElement::cartan(N, j));
        par.unit_of.emplace_back(-1, j);
        par.basis_h.push_back(par.global_basis.back());
        par.basis_p.push_back(par.global_basis.back());
    }

    // Remaining off-diagonal units lie in the parabolic: block(r) <= block(c).
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            if (r == c || flag.block_of(r) > flag.block_of(c)) continue;
            push_unit(r, c);
            par.basis_p.push_back(par.global_basis.back());
        }

    for (int r = 0; r < N; ++r)
        for (int c = r + 1; c < N; ++c)
            par.basis_n_plus.push_back(LieElement::matrix_unit(N, r, c));

    return par;
}

// rho(x) = sum_i l_i (tr A_1 + ... + tr A_i) for x in the parabolic.
inline Rat rho_character(const FlagType& flag, const Weight& wt, const LieElement& x) {
    wt.check(flag);
    if (x.size() != flag.N()) throw std::invalid_argument("matrix size mismatch");
    if (!in_parabolic(flag, x))
        throw std::invalid_argument("element not in the parabolic subalgebra");
    return wt.on_diagonal(flag, x);
}

// Diagonal element x with +1 at the last position of block k and -1 at the
// last position of block k+1; satisfies rho(x) = l_k and splits the parabolic
// as ker(rho) + span(x) when l_k != 0.
inline LieElement splitting_element(const FlagType& flag, const Weight& wt) {
    wt.check(flag);
    const int k = flag.steps();
    if (k < 1) throw std::invalid_argument("flag must have at least one step");
    if (wt.l.back() == 0)
        throw std::invalid_argument("degenerate character: l_k = 0");
    LieElement x(flag.N());
    x.set(flag.n(k) - 1, flag.n(k) - 1, Rat(1));
    x.set(flag.n(k + 1) - 1, flag.n(k + 1) - 1, Rat(-1));
    return x;
}

}  // namespace liejet
