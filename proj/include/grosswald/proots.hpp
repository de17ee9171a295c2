#pragma once

#include <vector>

#include "grosswald/arith.hpp"

namespace grosswald {

enum class RootMode { g, g_hat };

// Verdict for one prime. passes_* hold exactly when (root + 2)^2 < p, the
// integer form of root < sqrt(p) - 2; threshold_sq carries the comparand p.
struct RootReport {
    Integer p;
    Integer g;      // least primitive root
    Integer g_hat;  // least prime primitive root
    Integer threshold_sq;
    bool passes_g = false;
    bool passes_g_hat = false;
};

struct VerifyConfig {
    Integer cap = Integer("100000000");
    unsigned threads = 0; // 0: GROSSWALD_THREADS, else hardware parallelism
};

// True when y^e == a (mod p) has no solution for any divisor e > 1 of the
// product of e_primes; tested via a^((p-1)/q) != 1 for each q. Requires p
// prime, gcd(a, p) = 1 and each q | p - 1 (violations throw).
bool is_e_free(const Integer& a, const Integer& p, const std::vector<Integer>& e_primes,
               const Factorization& p_minus_1);

bool is_primitive_root(const Integer& a, const Integer& p, const Factorization& p_minus_1);

// Scans a = 2, 3, 4, ... (p = 2 answers 1). Requires p prime.
Integer least_primitive_root(const Integer& p);

// Scans a over primes 2, 3, 5, ... Requires p an odd prime.
Integer least_prime_primitive_root(const Integer& p);

// Computes both roots of an odd prime and the exact inequality verdicts.
RootReport grosswald_check(const Integer& p);

// All primes p in (lo, hi] whose mode root fails root < sqrt(p) - 2,
// ascending. Requires 2 <= lo < hi <= config.cap.
std::vector<Integer> verify_range(const Integer& lo, const Integer& hi, RootMode mode,
                                  const VerifyConfig& config = {});

} // namespace grosswald
