#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace confspace {

using BigInt = mpz_class;

/// (-1)^e for any integer exponent.
constexpr int minus_one_pow(long long e) { return (e % 2 == 0) ? 1 : -1; }

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt result;
    if (k > n) return result;
    mpz_bin_uiui(result.get_mpz_t(), n, k);
    return result;
}

/// Non-negative residue of v modulo m (m > 0).
inline BigInt mod_nonneg(const BigInt& v, const BigInt& m) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline std::uint64_t mod_u64(const BigInt& v, std::uint64_t m) {
    return mpz_fdiv_ui(v.get_mpz_t(), m);
}

inline bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// p^e as a 64-bit value; throws when it would overflow.
inline std::int64_t ipow(std::int64_t p, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i)
        if (__builtin_mul_overflow(r, p, &r)) throw std::overflow_error("ipow overflow");
    return r;
}

}  // namespace confspace
