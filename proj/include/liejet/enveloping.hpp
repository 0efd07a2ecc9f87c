#pragma once

#include "liejet/lie.hpp"
#include "liejet/linalg.hpp"
#include "liejet/rational.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liejet {

// Exponent vector over the globally ordered basis of g: n_- coordinates
// first, then the parabolic. Ordered PBW monomials are exactly nondecreasing
// words in the basis indices.
using Exponents = std::vector<unsigned char>;

inline int exponents_degree(const Exponents& e) {
    int d = 0;
    for (unsigned char x : e) d += x;
    return d;
}

inline std::vector<int> exponents_word(const Exponents& e) {
    std::vector<int> w;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (int r = 0; r < e[i]; ++r) w.push_back(static_cast<int>(i));
    return w;
}

// Finite rational combination of PBW monomials (a normal form in U(g)).
struct EnvElement {
    std::map<Exponents, Rat> terms;

    bool is_zero() const { return terms.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms) d = std::max(d, exponents_degree(e));
        return d;
    }

    void add_term(const Exponents& e, const Rat& c) {
        auto it = terms.find(e);
        if (it == terms.end()) {
            if (c != 0) terms.emplace(e, c);
            return;
        }
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }

    EnvElement& operator+=(const EnvElement& o) {
        for (const auto& [e, c] : o.terms) add_term(e, c);
        return *this;
    }

    EnvElement& operator*=(const Rat& c) {
        if (c == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [e, v] : terms) v *= c;
        return *this;
    }

    bool operator==(const EnvElement& o) const { return terms == o.terms; }
};

// Coordinates of a Lie element against the global ordered basis.
inline std::vector<std::pair<int, Rat>> coordinates_in_basis(const ParabolicDecomposition& par,
                                                             const LieElement& x) {
    const int N = par.flag.N();
    std::vector<Rat> diag(static_cast<std::size_t>(N), Rat(0));
    std::vector<std::pair<int, Rat>> coords;
    for (const auto& [rc, v] : x.entries()) {
        if (rc.first == rc.second)
            diag[static_cast<std::size_t>(rc.first)] = v;
        else
            coords.emplace_back(par.index_of_unit.at(rc), v);
    }
    // Diagonal part against H_1..H_{N-1}: coefficient of H_j is the partial
    // sum t_1 + ... + t_j (trace-zero makes the last partial sum vanish).
    Rat partial(0);
    for (int j = 0; j < N - 1; ++j) {
        partial += diag[static_cast<std::size_t>(j)];
        if (partial != 0) coords.emplace_back(par.index_of_cartan(j), partial);
    }
    std::sort(coords.begin(), coords.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return coords;
}

// PBW normal-form calculus for U(sl_N) over a fixed parabolic ordering.
// Straightening rewrites xy = yx + [x,y] at the leftmost inversion; the
// bracket table doubles as the memo for all 2-letter normal forms.
class EnvAlgebra {
   public:
    explicit EnvAlgebra(const ParabolicDecomposition& par, int degree_cap = 6)
        : par_(par), degree_cap_(degree_cap) {
        const int n = par_.dim_g();
        brackets_.resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                LieElement b = bracket(par_.global_basis[static_cast<std::size_t>(i)],
                                       par_.global_basis[static_cast<std::size_t>(j)]);
                if (!b.is_zero())
                    brackets_[static_cast<std::size_t>(i) * n + j] = coordinates_in_basis(par_, b);
            }
    }

    const ParabolicDecomposition& par() const { return par_; }
    int dim_g() const { return par_.dim_g(); }
    int degree_cap() const { return degree_cap_; }

    EnvElement normal_form(const std::vector<int>& word, const Rat& coeff = Rat(1)) const {
        if (static_cast<int>(word.size()) > degree_cap_)
            throw ResourceError("word of length " + std::to_string(word.size()) +
                                " exceeds enveloping degree cap " + std::to_string(degree_cap_));
        EnvElement out;
        std::vector<std::pair<std::vector<int>, Rat>> stack;
        stack.emplace_back(word, coeff);
        while (!stack.empty()) {
            auto [w, c] = std::move(stack.back());
            stack.pop_back();
            std::size_t inv = w.size();
            for (std::size_t i = 0; i + 1 < w.size(); ++i)
                if (w[i] > w[i + 1]) {
                    inv = i;
                    break;
                }
            if (inv == w.size()) {
                Exponents e(static_cast<std::size_t>(dim_g()), 0);
                for (int idx : w) ++e[static_cast<std::size_t>(idx)];
                out.add_term(e, c);
                continue;
            }
            std::vector<int> swapped = w;
            std::swap(swapped[inv], swapped[inv + 1]);
            const auto& br = brackets_[static_cast<std::size_t>(w[inv]) * dim_g() + w[inv + 1]];
            for (const auto& [k, s] : br) {
                std::vector<int> shorter;
                shorter.reserve(w.size() - 1);
                shorter.insert(shorter.end(), w.begin(), w.begin() + static_cast<long>(inv));
                shorter.push_back(k);
                shorter.insert(shorter.end(), w.begin() + static_cast<long>(inv) + 2, w.end());
                stack.emplace_back(std::move(shorter), c * s);
            }
            stack.emplace_back(std::move(swapped), c);
        }
        return out;
    }

    EnvElement multiply(const EnvElement& a, const EnvElement& b) const {
        EnvElement out;
        for (const auto& [ea, ca] : a.terms)
            for (const auto& [eb, cb] : b.terms) {
                std::vector<int> w = exponents_word(ea);
                std::vector<int> wb = exponents_word(eb);
                w.insert(w.end(), wb.begin(), wb.end());
                out += normal_form(w, ca * cb);
            }
        return out;
    }

   private:
    ParabolicDecomposition par_;
    int degree_cap_;
    std::vector<std::vector<std::pair<int, Rat>>> brackets_;
};

// Coordinate basis of U^k(g): all PBW monomials of degree <= k, enumerated by
// degree and then reverse-lexicographically; size binom(dim g + k, k).
struct MonomialIndex {
    int dim_g = 0;
    int k = 0;
    std::vector<Exponents> monos;
    std::map<Exponents, std::int64_t> pos;

    std::int64_t size() const { return static_cast<std::int64_t>(monos.size()); }

    RatVec to_coords(const EnvElement& x) const {
        std::vector<std::pair<std::int64_t, Rat>> entries;
        entries.reserve(x.terms.size());
        for (const auto& [e, c] : x.terms) {
            auto it = pos.find(e);
            if (it == pos.end())
                throw std::invalid_argument("element has degree above the monomial index");
            entries.emplace_back(it->second, c);
        }
        return make_vector(size(), std::move(entries));
    }
};

namespace detail {
inline void enumerate_degree(int dim_g, int pos, int remaining, Exponents& cur,
                             std::vector<Exponents>& out) {
    if (pos == dim_g - 1) {
        cur[static_cast<std::size_t>(pos)] = static_cast<unsigned char>(remaining);
        out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[static_cast<std::size_t>(pos)] = static_cast<unsigned char>(e);
        enumerate_degree(dim_g, pos + 1, remaining - e, cur, out);
    }
    cur[static_cast<std::size_t>(pos)] = 0;
}
}  // namespace detail

inline MonomialIndex filtration_monomials(int dim_g, int k) {
    Int count = binomial(dim_g + k, k);
    if (count > 2000000)
        throw ResourceError("U^k coordinate space of size " + count.get_str() +
                            " is above the materialization limit");
    MonomialIndex idx;
    idx.dim_g = dim_g;
    idx.k = k;
    Exponents cur(static_cast<std::size_t>(dim_g), 0);
    for (int d = 0; d <= k; ++d) detail::enumerate_degree(dim_g, 0, d, cur, idx.monos);
    for (std::int64_t i = 0; i < idx.size(); ++i) idx.pos[idx.monos[static_cast<std::size_t>(i)]] = i;
    return idx;
}

// Monomials of degree <= maxdeg supported on a fixed index subset, as words.
inline std::vector<std::vector<int>> monomial_words_on(const std::vector<int>& indices,
                                                       int maxdeg) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    // nondecreasing words over `indices` (which are sorted)
    struct Rec {
        const std::vector<int>& idx;
        int maxdeg;
        std::vector<std::vector<int>>& out;
        void go(std::size_t start, std::vector<int>& cur) {
            out.push_back(cur);
            if (static_cast<int>(cur.size()) == maxdeg) return;
            for (std::size_t i = start; i < idx.size(); ++i) {
                cur.push_back(idx[i]);
                go(i, cur);
                cur.pop_back();
            }
        }
    } rec{indices, maxdeg, out};
    if (maxdeg >= 0) rec.go(0, cur);
    return out;
}

// m_beta for the 0-based simple root index i: l_j + 1 when i+1 == n_j, else 1.
inline long m_beta(const FlagType& flag, const Weight& wt, int i) {
    wt.check(flag);
    if (i < 0 || i >= flag.N() - 1) throw std::invalid_argument("simple root index out of range");
    for (int j = 1; j <= flag.steps(); ++j)
        if (flag.n(j) == i + 1) return wt.l[static_cast<std::size_t>(j - 1)] + 1;
    return 1;
}

// char^k(rho) = U^{k-1}(g){y - rho(y) : y in p}, inside U^k(g) coordinates.
inline Subspace character_ideal_span(const EnvAlgebra& alg, const Weight& wt, int k,
                                     const MonomialIndex& coords) {
    if (k < 1) throw std::invalid_argument("character ideal filtration needs k >= 1");
    const ParabolicDecomposition& par = alg.par();
    const FlagType& flag = par.flag;
    wt.check(flag);
    MonomialIndex lower = filtration_monomials(alg.dim_g(), k - 1);
    Subspace s(coords.size());
    for (const auto& mono : lower.monos) {
        std::vector<int> base = exponents_word(mono);
        for (int y = static_cast<int>(par.D()); y < alg.dim_g(); ++y) {
            std::vector<int> w = base;
            w.push_back(y);
            EnvElement gen = alg.normal_form(w);
            Rat rho = rho_character(flag, wt, par.global_basis[static_cast<std::size_t>(y)]);
            if (rho != 0) {
                EnvElement shift = alg.normal_form(base, -rho);
                gen += shift;
            }
            s.insert(coords.to_coords(gen));
        }
    }
    return s;
}

namespace detail {

// Degree-k part of the span of a family of U(g_-) elements generated up to a
// larger degree bound. The sum of the cyclic modules U(g_-) X_{-beta}^{m} is
// not a left ideal: reordering products across different beta cancels leading
// terms and drops degree (e.g. E_43 E_32 - E_32 E_43 = E_42), so elements of
// the intersection with U^k can only be reached from generators above degree
// k. Coordinates are ordered with the high-degree monomials first; echelon
// rows whose pivot falls in the low block then span exactly the intersection.
inline std::vector<EnvElement> low_degree_part(const std::vector<EnvElement>& gens,
                                               const std::vector<int>& support,
                                               std::size_t width, int k, int bound) {
    std::vector<Exponents> monos;
    {
        std::vector<std::vector<int>> words = monomial_words_on(support, bound);
        for (const auto& w : words) {
            Exponents e(width, 0);
            for (int idx : w) ++e[static_cast<std::size_t>(idx)];
            monos.push_back(std::move(e));
        }
    }
    std::stable_sort(monos.begin(), monos.end(), [&](const Exponents& a, const Exponents& b) {
        bool la = exponents_degree(a) <= k, lb = exponents_degree(b) <= k;
        if (la != lb) return !la;  // high-degree block first
        return a < b;
    });
    std::map<Exponents, std::int64_t> pos;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(monos.size()); ++i) pos[monos[i]] = i;

    Subspace sp(static_cast<std::int64_t>(monos.size()));
    for (const auto& g : gens) {
        std::vector<std::pair<std::int64_t, Rat>> entries;
        for (const auto& [e, c] : g.terms) entries.emplace_back(pos.at(e), c);
        sp.insert(make_vector(static_cast<std::int64_t>(monos.size()), std::move(entries)));
    }

    std::vector<EnvElement> out;
    for (const auto& row : sp.rows()) {
        if (exponents_degree(monos[static_cast<std::size_t>(row.leading_index())]) > k) continue;
        EnvElement x;
        for (const auto& [i, c] : row.entries)
            x.add_term(monos[static_cast<std::size_t>(i)], c);
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace detail

// I^k(v) + K^k(v): the Verma-side annihilator generators
//   U^{k-1}(g) n_+,  U^{k-1}(g)(H_j - lambda(H_j)),
// plus the degree <= k part of sum_beta U(g_-) X_{-beta}^{m_beta} over the
// simple roots, generated with extra degree headroom to catch the cross-term
// cancellations between different beta summands.
inline Subspace dixmier_annihilator_span(const EnvAlgebra& alg, const Weight& wt, int k,
                                         const MonomialIndex& coords, int headroom = -1) {
    if (k < 1) throw std::invalid_argument("annihilator filtration needs k >= 1");
    const ParabolicDecomposition& par = alg.par();
    const FlagType& flag = par.flag;
    const int N = flag.N();
    wt.check(flag);
    Subspace s(coords.size());

    std::vector<int> raising;
    for (int g = 0; g < alg.dim_g(); ++g) {
        auto [r, c] = par.unit_of[static_cast<std::size_t>(g)];
        if (r >= 0 && r < c) raising.push_back(g);
    }

    MonomialIndex lower = filtration_monomials(alg.dim_g(), k - 1);
    for (const auto& mono : lower.monos) {
        std::vector<int> base = exponents_word(mono);
        for (int y : raising) {
            std::vector<int> w = base;
            w.push_back(y);
            s.insert(coords.to_coords(alg.normal_form(w)));
        }
        for (int j = 0; j < N - 1; ++j) {
            std::vector<int> w = base;
            w.push_back(par.index_of_cartan(j));
            EnvElement gen = alg.normal_form(w);
            long lam = wt.on_cartan(flag, j);
            if (lam != 0) gen += alg.normal_form(base, Rat(-lam));
            s.insert(coords.to_coords(gen));
        }
    }

    std::vector<int> lowers = par.lower_unit_indices();
    auto k_part = [&](int bound) {
        std::vector<EnvElement> kgens;
        for (int i = 0; i < N - 1; ++i) {
            long m = m_beta(flag, wt, i);
            if (bound - m < 0) continue;
            int xm = par.index_of_lowering(i);
            for (const auto& base : monomial_words_on(lowers, static_cast<int>(bound - m))) {
                std::vector<int> w = base;
                for (long r = 0; r < m; ++r) w.push_back(xm);
                kgens.push_back(alg.normal_form(w));
            }
        }
        Subspace out(coords.size());
        for (const auto& x : detail::low_degree_part(
                 kgens, lowers, static_cast<std::size_t>(alg.dim_g()), k, bound))
            out.insert(coords.to_coords(x));
        return out;
    };

    Subspace kspan(coords.size());
    if (headroom >= 0) {
        kspan = k_part(std::min(k + headroom, alg.degree_cap()));
    } else {
        // iterated brackets of simple lowering units reach a given unit after
        // at most N-2 reorderings, each costing one degree; grow further
        // until the harvested span stops changing or the degree cap is hit
        int bound = std::min(k + std::max(N - 2, 1), alg.degree_cap());
        kspan = k_part(bound);
        while (bound < alg.degree_cap()) {
            Subspace next = k_part(++bound);
            if (next == kspan) break;
            kspan = std::move(next);
        }
    }
    for (const auto& row : kspan.rows()) s.insert(row);
    return s;
}

struct DecompositionCheck {
    bool holds = false;
    std::int64_t rank_n_minus = 0;
    std::int64_t rank_char = 0;
    std::int64_t total = 0;
};

// U^k(g) = U^k(n_-) (+) char^k(rho): direct-sum test in PBW coordinates.
inline DecompositionCheck check_decomposition(const EnvAlgebra& alg, const Weight& wt, int k) {
    MonomialIndex coords = filtration_monomials(alg.dim_g(), k);
    const std::int64_t D = alg.par().D();
    Subspace n_minus_side(coords.size());
    for (std::int64_t i = 0; i < coords.size(); ++i) {
        const Exponents& e = coords.monos[static_cast<std::size_t>(i)];
        bool supported = true;
        for (std::size_t j = static_cast<std::size_t>(D); j < e.size(); ++j)
            if (e[j] != 0) {
                supported = false;
                break;
            }
        if (supported) n_minus_side.insert(unit_vector(coords.size(), i));
    }
    Subspace chr = character_ideal_span(alg, wt, k, coords);
    DecompositionCheck out;
    out.rank_n_minus = n_minus_side.rank();
    out.rank_char = chr.rank();
    out.total = coords.size();
    out.holds = direct_sum_check(n_minus_side, chr) &&
                out.rank_n_minus + out.rank_char == out.total;
    return out;
}

}  // namespace liejet
