#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace liejet {

// Exact scalar used throughout. All arithmetic in this library is exact;
// there is no floating point anywhere.
using Rat = mpq_class;
using Int = mpz_class;

// Thrown when a computation would exceed a configured resource cap
// (ambient dimension, enveloping degree, span size). The message carries
// the sizing diagnostics.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

inline Int binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return Int(0);
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

// Binomial as int64, guarded: counts used as loop bounds must stay addressable.
inline std::int64_t binomial_i64(long n, long k) {
    Int b = binomial(n, k);
    if (!b.fits_slong_p())
        throw ResourceError("binomial(" + std::to_string(n) + "," + std::to_string(k) +
                            ") does not fit in a machine word");
    return static_cast<std::int64_t>(b.get_si());
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

}  // namespace liejet
