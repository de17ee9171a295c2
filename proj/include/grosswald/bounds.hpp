#pragma once

#include <optional>
#include <vector>

#include "grosswald/arith.hpp"

namespace grosswald {

enum class Assumptions {
    grh_conditional,
    unconditional,
    mixed, // bound eliminations plus direct checks in one result
};

const char* to_cstring(Assumptions a);

struct BoundInputs {
    long double p = 0;
    std::optional<long double> x;
    std::optional<unsigned> n;
    std::optional<unsigned> s;
    std::optional<long double> delta;
};

struct BoundEvaluation {
    long double value = 0;
    Assumptions assumptions = Assumptions::grh_conditional;
    BoundInputs inputs;
};

struct ShrinkStep {
    long double p_max = 0;
    unsigned omega_max = 0;
};

struct ShrinkResult {
    std::vector<ShrinkStep> chain; // strictly decreasing p_max, non-increasing omega_max
    long double final_p_max = 0;
    unsigned final_omega_max = 0;
};

// Character-sum constant
//   c(p, x) = (2/3)(1 + 2/sqrt(x) + 3/x^{3/2})(1 + (5/3)/log p) + (log x + 2)/(sqrt(x) log p)
// evaluated with a small upward rounding margin (never below the exact value).
// Requires p >= 2 and x >= 1; natural logarithms throughout.
long double bach_c(long double p, long double x);

// ((8/5)(2^omega - 1) log p)^2, the sieve-free least-prime-root bound.
// Valid for p >= 10^9 (throws out_of_theorem_range below) and omega >= 1.
BoundEvaluation ankeny_bound(long double p, unsigned omega);

// floor(1.385 log(bound) / log log(bound)); an upper bound on omega(n) for
// all n <= bound. Requires bound >= 3.
unsigned omega_max_robin(long double bound);

// Largest k with primorial(k) <= bound (exact integer comparison).
// Requires bound >= 1.
unsigned omega_max_primorial(long double bound);

// Alternates the sieve-free bound with the primorial omega bound until the
// admissible region stops shrinking. Throws invalid_start when the start
// bound does not dominate its own tail.
ShrinkResult shrink_fixpoint(long double start_bound);

// (2 c(p,x) (2 + (s-1)/delta) 2^{n-s} log p)^2. Requires p >= 2, x >= 1,
// 1 <= s <= n-1 and delta > 0.
BoundEvaluation sieve_bound(long double p, long double x, unsigned n, unsigned s, long double delta);

// C(p0) = 2 c(p0, x0) with x0 = ((4/3) * 4 * log p0)^2, rounded up at the
// fifth significant digit. Requires p0 >= 100.
long double table1_constant(long double p0);

// Least U >= floor_p with sieve_bound(p, sqrt(p)-2, n, s, delta) < sqrt(p)-2
// for all p >= U, then widened by a fixed 0.1% certification margin.
// Monotone in p, so located by doubling plus bisection. Throws
// unbounded_case past 10^60.
long double solve_threshold(unsigned n, unsigned s, long double delta, long double floor_p);

} // namespace grosswald
