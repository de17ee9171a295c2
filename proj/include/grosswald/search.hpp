#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "grosswald/bounds.hpp"
#include "grosswald/proots.hpp"

namespace grosswald {

// Divisibility profile of one case: every prime in X divides p - 1, no prime
// in Y does. X and Y are disjoint and X ∪ Y is a prefix of the primes.
struct CaseConstraints {
    unsigned n = 0; // target omega(p - 1)
    std::vector<std::uint64_t> X;
    std::vector<std::uint64_t> Y;
};

struct SieveParams {
    unsigned n = 0;
    unsigned s = 0;
    long double delta = 0;            // 1 - sum of reciprocals of M, > 0
    std::vector<std::uint64_t> M;     // largest s primes of L
    std::vector<std::uint64_t> L;     // first n primes not in Y
};

// Candidate range [lower, upper) for p; empty when upper <= lower.
struct SearchInterval {
    Integer lower;
    Integer upper;
    bool empty() const { return upper <= lower; }
};

struct ExceptionRecord {
    Integer p;
    Factorization p_minus_1;
    CaseConstraints constraints;
    std::optional<RootReport> report; // filled during post-processing
};

struct SearchConfig {
    Integer floor = Integer("2000000000000000"); // region already verified elsewhere
    std::uint64_t enum_cap = 1'000'000;
    std::size_t max_case_primes = 64; // X ∪ Y may not grow past this many primes
    unsigned threads = 0;
    FactorEffort effort{};
};

// One visited node of the case recursion, in visit order.
struct CaseLine {
    CaseConstraints constraints;
    SieveParams params;
    Integer lower;
    Integer upper;
    enum class Action { nothing, split, enumerate } action = Action::nothing;
    std::uint64_t candidates = 0; // size of the k range when enumerating
};

struct CaseReport {
    unsigned n = 0;
    std::vector<CaseLine> lines;
    std::vector<ExceptionRecord> exceptions;
    bool verdict_holds = false;
    Assumptions assumptions = Assumptions::grh_conditional;
};

// Picks the s in [1, n-1] whose threshold from solve_threshold is smallest
// (delta <= 0 candidates are skipped; all skipped -> unbounded_case).
// `lower` is accepted for interface symmetry; thresholds are solved
// unclamped so empty intervals surface as upper <= lower.
std::pair<SieveParams, long double> best_sieve_params(unsigned n, const std::vector<std::uint64_t>& Y,
                                                      const Integer& lower);

// [max(product(L) + 1, floor), ceil(threshold)) as exact integers.
SearchInterval derive_interval(const SieveParams& params, long double threshold,
                               const SearchConfig& config);

// All primes p = k * product(X) + 1 in the interval with no Y prime dividing
// p - 1 and omega(p - 1) = n, ascending. Throws must_split when the k range
// exceeds config.enum_cap.
std::vector<ExceptionRecord> enumerate_candidates(const CaseConstraints& constraints,
                                                  const SearchInterval& interval,
                                                  const SearchConfig& config);

// Full recursive case split: enumerate when the interval is small enough,
// otherwise branch on the smallest untouched prime q (q | p - 1 first, then
// q ∤ p - 1). Records are merged and sorted by p; on_case (when set) sees
// every visited node in depth-first order.
std::vector<ExceptionRecord> grosswald_recurse(const CaseConstraints& constraints,
                                               const SearchConfig& config,
                                               const std::function<void(const CaseLine&)>& on_case = {});

// grosswald_recurse from (X = {2}, Y = {}) plus direct root verification of
// every exception, with record invariants re-checked.
CaseReport run_case(unsigned n, const SearchConfig& config = {});

} // namespace grosswald
