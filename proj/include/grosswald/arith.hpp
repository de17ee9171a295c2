#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "grosswald/errors.hpp"

namespace grosswald {

using Integer = mpz_class;

struct PrimePower {
    Integer prime;
    unsigned exponent = 0;
};

// Complete factorization: value == product(prime^exponent), primes strictly
// increasing, exponents >= 1. Produced by factorize(); never partial.
struct Factorization {
    Integer value;
    std::vector<PrimePower> factors;

    std::size_t omega() const { return factors.size(); }
    bool contains(const Integer& prime) const;

    // Re-verifies the invariants from scratch (product, ordering, primality).
    // Throws grosswald::error on the first violation.
    void validate() const;
};

struct FactorEffort {
    std::uint64_t rho_iterations = std::uint64_t{1} << 24; // per restart
    unsigned rho_restarts = 32;
};

// base^exp mod modulus. Requires base, exp >= 0 and modulus >= 2.
Integer mod_pow(const Integer& base, const Integer& exp, const Integer& modulus);

// Deterministic Miller-Rabin below 3.317e24 (first 13 prime witnesses);
// extra witnesses above that make a false positive vanishingly unlikely.
// Requires n >= 1.
bool is_probable_prime(const Integer& n);
bool is_prime_u64(std::uint64_t n) noexcept;

// Trial division by all primes < 10^6, then Brent-cycle rho on what's left.
// Throws incomplete_factorization if the effort cap is hit. Requires n >= 1.
Factorization factorize(const Integer& n, const FactorEffort& effort = {});
Factorization factorize_u64(std::uint64_t n, const FactorEffort& effort = {});

// First k primes, in order. Cached; thread-safe.
std::vector<std::uint64_t> first_primes(std::size_t k);

// Product of the first k primes (exact).
Integer primorial(std::size_t k);

// All primes below 10^6, built once on first use, immutable afterwards.
std::span<const std::uint32_t> small_primes();

namespace u64ops {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept;

// Nontrivial factor of an odd composite n < 2^63 (not a prime power check;
// callers strip those first), or 0 when the effort budget runs out.
std::uint64_t pollard_rho(std::uint64_t n, const FactorEffort& effort = {});

// Montgomery arithmetic mod an odd m with 3 <= m < 2^63. Values live in the
// Montgomery domain (xR mod m with R = 2^64) between to() and from().
class Montgomery {
  public:
    explicit Montgomery(std::uint64_t m);

    std::uint64_t modulus() const noexcept { return m_; }
    std::uint64_t one() const noexcept { return one_; }
    std::uint64_t to(std::uint64_t x) const noexcept { return reduce(static_cast<unsigned __int128>(x % m_) * r2_); }
    std::uint64_t from(std::uint64_t x) const noexcept { return reduce(x); }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept { return reduce(static_cast<unsigned __int128>(a) * b); }
    std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const noexcept;

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
        std::uint64_t s = a + b;
        if (s < a || s >= m_) s -= m_;
        return s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
        return a >= b ? a - b : a + m_ - b;
    }

  private:
    std::uint64_t reduce(unsigned __int128 t) const noexcept {
        std::uint64_t q = static_cast<std::uint64_t>(t) * neg_inv_;
        std::uint64_t r = static_cast<std::uint64_t>((t + static_cast<unsigned __int128>(q) * m_) >> 64);
        return r >= m_ ? r - m_ : r;
    }

    std::uint64_t m_ = 0;
    std::uint64_t neg_inv_ = 0; // -m^{-1} mod 2^64
    std::uint64_t r2_ = 0;      // 2^128 mod m
    std::uint64_t one_ = 0;     // R mod m
};

} // namespace u64ops

// Helpers shared by the bounds and search modules.
bool fits_u64(const Integer& n);
std::uint64_t to_u64(const Integer& n);

// Exact conversion of a nonnegative finite long double to an Integer.
Integer integer_floor(long double v);
Integer integer_ceil(long double v);

} // namespace grosswald
