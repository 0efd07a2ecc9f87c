#pragma once

#include "liejet/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace liejet {

// Sparse vector with exact rational entries, sorted by index, no stored zeros.
struct RatVec {
    std::int64_t dim = 0;
    std::vector<std::pair<std::int64_t, Rat>> entries;

    RatVec() = default;
    explicit RatVec(std::int64_t d) : dim(d) {}

    bool is_zero() const { return entries.empty(); }
    std::int64_t leading_index() const { return entries.front().first; }
    const Rat& leading_coeff() const { return entries.front().second; }

    // Coefficient lookup by binary search.
    const Rat* find(std::int64_t idx) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), idx,
                                   [](const auto& p, std::int64_t i) { return p.first < i; });
        if (it == entries.end() || it->first != idx) return nullptr;
        return &it->second;
    }

    bool operator==(const RatVec& o) const { return dim == o.dim && entries == o.entries; }
};

inline RatVec unit_vector(std::int64_t dim, std::int64_t idx) {
    RatVec v(dim);
    v.entries.emplace_back(idx, Rat(1));
    return v;
}

inline RatVec make_vector(std::int64_t dim,
                          std::vector<std::pair<std::int64_t, Rat>> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    RatVec v(dim);
    for (auto& [i, c] : entries) {
        if (i < 0 || i >= dim) throw std::invalid_argument("vector index out of range");
        if (c == 0) continue;
        if (!v.entries.empty() && v.entries.back().first == i)
            throw std::invalid_argument("duplicate vector index");
        v.entries.emplace_back(i, std::move(c));
    }
    return v;
}

// a*u + b*v, merging sorted entry lists.
inline RatVec linear_combine(const Rat& a, const RatVec& u, const Rat& b, const RatVec& v) {
    if (u.dim != v.dim) throw std::invalid_argument("dimension mismatch");
    RatVec r(u.dim);
    r.entries.reserve(u.entries.size() + v.entries.size());
    std::size_t i = 0, j = 0;
    Rat tmp;
    while (i < u.entries.size() || j < v.entries.size()) {
        if (j == v.entries.size() ||
            (i < u.entries.size() && u.entries[i].first < v.entries[j].first)) {
            tmp = a * u.entries[i].second;
            if (tmp != 0) r.entries.emplace_back(u.entries[i].first, tmp);
            ++i;
        } else if (i == u.entries.size() || v.entries[j].first < u.entries[i].first) {
            tmp = b * v.entries[j].second;
            if (tmp != 0) r.entries.emplace_back(v.entries[j].first, tmp);
            ++j;
        } else {
            tmp = a * u.entries[i].second + b * v.entries[j].second;
            if (tmp != 0) r.entries.emplace_back(u.entries[i].first, tmp);
            ++i;
            ++j;
        }
    }
    return r;
}

inline RatVec scaled(const RatVec& v, const Rat& c) {
    RatVec r(v.dim);
    if (c == 0) return r;
    r.entries.reserve(v.entries.size());
    for (const auto& [i, x] : v.entries) r.entries.emplace_back(i, c * x);
    return r;
}

// Scale so all entries are integers with content 1 and positive leading
// coefficient. Returns the applied factor (result = factor * v).
inline Rat normalize_primitive(RatVec& v) {
    if (v.is_zero()) return Rat(1);
    Int lcm_den(1), gcd_num(0);
    for (const auto& [i, c] : v.entries) {
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den().get_mpz_t());
    }
    for (const auto& [i, c] : v.entries) {
        Int num = c.get_num() * (lcm_den / c.get_den());
        mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), num.get_mpz_t());
    }
    Rat factor(lcm_den, gcd_num);
    factor.canonicalize();
    if (sgn(v.entries.front().second) < 0) factor = -factor;
    for (auto& [i, c] : v.entries) c *= factor;
    return factor;
}

// Subspace in canonical form: rows are an integer-primitive reduced echelon
// basis, sorted by pivot index, with every pivot column cleared in the other
// rows. Two Subspace objects over the same ambient space are equal as
// subspaces iff their rows compare equal.
class Subspace {
   public:
    Subspace() = default;
    explicit Subspace(std::int64_t ambient) : ambient_(ambient) {}

    std::int64_t ambient() const { return ambient_; }
    std::int64_t rank() const { return static_cast<std::int64_t>(rows_.size()); }
    const std::vector<RatVec>& rows() const { return rows_; }

    std::vector<std::int64_t> pivots() const {
        std::vector<std::int64_t> p;
        p.reserve(rows_.size());
        for (const auto& r : rows_) p.push_back(r.leading_index());
        return p;
    }

    // Fully reduce v against the echelon rows; the residual has no entry at
    // any pivot column and is primitive (or zero). Fraction-free elimination:
    // cross-multiplied updates with a gcd renormalization at the end.
    RatVec reduce(RatVec v) const {
        check_dim(v);
        std::size_t r = 0;
        while (!v.is_zero() && r < rows_.size()) {
            std::int64_t lead = v.leading_index();
            while (r < rows_.size() && rows_[r].leading_index() < lead) ++r;
            if (r == rows_.size()) break;
            if (rows_[r].leading_index() == lead) {
                v = linear_combine(rows_[r].leading_coeff(), v, -v.leading_coeff(), rows_[r]);
            } else {
                // leading index not a pivot; eliminate deeper entries if any
                const Rat* c = v.find(rows_[r].leading_index());
                if (c) {
                    v = linear_combine(rows_[r].leading_coeff(), v, -*c, rows_[r]);
                } else {
                    ++r;
                }
            }
        }
        normalize_primitive(v);
        return v;
    }

    bool contains(const RatVec& v) const { return reduce(v).is_zero(); }

    bool contains(const Subspace& other) const {
        if (ambient_ != other.ambient_) throw std::invalid_argument("ambient mismatch");
        for (const auto& r : other.rows_)
            if (!contains(r)) return false;
        return true;
    }

    // Insert a vector; returns true if the rank grew. Maintains the reduced
    // echelon invariant by clearing the new pivot column from existing rows.
    bool insert(const RatVec& v) {
        RatVec w = reduce(v);
        if (w.is_zero()) return false;
        std::int64_t piv = w.leading_index();
        for (auto& row : rows_) {
            const Rat* c = row.find(piv);
            if (c) {
                row = linear_combine(w.leading_coeff(), row, -*c, w);
                normalize_primitive(row);
            }
        }
        auto it = std::lower_bound(rows_.begin(), rows_.end(), piv,
                                   [](const RatVec& r, std::int64_t p) {
                                       return r.leading_index() < p;
                                   });
        rows_.insert(it, std::move(w));
        return true;
    }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && rows_ == o.rows_;
    }

   private:
    void check_dim(const RatVec& v) const {
        if (v.dim != ambient_) throw std::invalid_argument("dimension mismatch");
    }

    std::int64_t ambient_ = 0;
    std::vector<RatVec> rows_;
};

inline Subspace span(std::int64_t ambient, const std::vector<RatVec>& vectors) {
    Subspace s(ambient);
    for (const auto& v : vectors) s.insert(v);
    return s;
}

// True iff S + T is direct: rank(S) + rank(T) == rank(S ∪ T).
inline bool direct_sum_check(const Subspace& S, const Subspace& T) {
    if (S.ambient() != T.ambient()) throw std::invalid_argument("ambient mismatch");
    Subspace u = S;
    for (const auto& r : T.rows()) u.insert(r);
    return u.rank() == S.rank() + T.rank();
}

// Incremental kernel computation for a linear map given column by column:
// feed(image of domain basis vector e_t) either absorbs the image into an
// echelon of the column space or, when the image is dependent, returns the
// dependency as a kernel vector in domain coordinates.
class KernelTracker {
   public:
    KernelTracker(std::int64_t domain_dim, std::int64_t image_dim)
        : domain_(domain_dim), image_dim_(image_dim), kernel_(domain_dim) {}

    void feed(RatVec image) {
        if (image.dim != image_dim_) throw std::invalid_argument("image dimension mismatch");
        RatVec tag = unit_vector(domain_, next_++);
        std::size_t r = 0;
        while (!image.is_zero() && r < rows_.size()) {
            std::int64_t lead = image.leading_index();
            while (r < rows_.size() && rows_[r].first.leading_index() < lead) ++r;
            if (r == rows_.size()) break;
            const Rat* c = image.find(rows_[r].first.leading_index());
            if (c) {
                const Rat p = rows_[r].first.leading_coeff();
                const Rat m = *c;
                image = linear_combine(p, image, -m, rows_[r].first);
                tag = linear_combine(p, tag, -m, rows_[r].second);
            } else {
                ++r;
            }
        }
        if (image.is_zero()) {
            kernel_.insert(tag);
            return;
        }
        Rat f = normalize_primitive(image);
        tag = scaled(tag, f);
        auto it = std::lower_bound(rows_.begin(), rows_.end(), image.leading_index(),
                                   [](const auto& row, std::int64_t p) {
                                       return row.first.leading_index() < p;
                                   });
        rows_.insert(it, {std::move(image), std::move(tag)});
    }

    std::int64_t image_rank() const { return static_cast<std::int64_t>(rows_.size()); }
    std::int64_t fed() const { return next_; }
    const Subspace& kernel() const { return kernel_; }

   private:
    std::int64_t domain_;
    std::int64_t image_dim_;
    std::int64_t next_ = 0;
    std::vector<std::pair<RatVec, RatVec>> rows_;  // (image echelon row, domain tag)
    Subspace kernel_;
};

}  // namespace liejet
