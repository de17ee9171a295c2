#include "grosswald/search.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "grosswald/errors.hpp"
#include "parallel.hpp"

namespace grosswald {

namespace {

constexpr long double kSlack = 64 * LDBL_EPSILON;

long double nudge_up(long double v) {
    return v > 0 ? v * (1 + kSlack) : v * (1 - kSlack);
}

long double nudge_down(long double v) {
    return v > 0 ? v * (1 - kSlack) : v * (1 + kSlack);
}

Integer product_of(const std::vector<std::uint64_t>& primes) {
    Integer r = 1;
    for (std::uint64_t q : primes) r *= Integer(q);
    return r;
}

void check_sorted_primes(const std::vector<std::uint64_t>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!is_prime_u64(v[i]))
            throw std::invalid_argument(std::string("search: ") + name + " contains a non-prime");
        if (i > 0 && v[i - 1] >= v[i])
            throw std::invalid_argument(std::string("search: ") + name + " must be strictly increasing");
    }
}

void validate_constraints(const CaseConstraints& c) {
    if (c.n == 0) throw std::invalid_argument("search: n must be >= 1");
    check_sorted_primes(c.X, "X");
    check_sorted_primes(c.Y, "Y");
    std::vector<std::uint64_t> merged;
    merged.reserve(c.X.size() + c.Y.size());
    std::merge(c.X.begin(), c.X.end(), c.Y.begin(), c.Y.end(), std::back_inserter(merged));
    for (std::size_t i = 1; i < merged.size(); ++i)
        if (merged[i - 1] == merged[i])
            throw std::invalid_argument("search: X and Y must be disjoint");
    const auto prefix = first_primes(merged.size());
    if (!std::equal(merged.begin(), merged.end(), prefix.begin()))
        throw std::invalid_argument("search: X and Y together must form a prime prefix");
}

// First n primes with Y removed.
std::vector<std::uint64_t> sieve_primes(unsigned n, const std::vector<std::uint64_t>& Y) {
    const auto pool = first_primes(static_cast<std::size_t>(n) + Y.size());
    std::vector<std::uint64_t> L;
    L.reserve(n);
    for (std::uint64_t q : pool) {
        if (std::binary_search(Y.begin(), Y.end(), q)) continue;
        L.push_back(q);
        if (L.size() == n) break;
    }
    return L;
}

// k range with p = k * prodx + 1 falling in [lower, upper); k >= 1.
struct KRange {
    Integer lo;
    Integer hi;
};

std::optional<KRange> k_range(const Integer& lower, const Integer& upper, const Integer& prodx) {
    if (upper <= lower) return std::nullopt;
    KRange r;
    const Integer a = lower - 1;
    const Integer b = upper - 2;
    mpz_cdiv_q(r.lo.get_mpz_t(), a.get_mpz_t(), prodx.get_mpz_t());
    mpz_fdiv_q(r.hi.get_mpz_t(), b.get_mpz_t(), prodx.get_mpz_t());
    if (r.lo < 1) r.lo = 1;
    if (r.hi < r.lo) return std::nullopt;
    return r;
}

std::uint64_t isqrt_u64(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(sqrtl(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Distinct prime factors of a cofactor whose factors all exceed the sieve
// limit, so a composite has at most three of them.
void split_large(std::uint64_t v, std::vector<std::uint64_t>& primes, const FactorEffort& effort) {
    if (v == 1) return;
    if (is_prime_u64(v)) {
        primes.push_back(v);
        return;
    }
    const std::uint64_t r = isqrt_u64(v);
    if (r * r == v) {
        split_large(r, primes, effort);
        split_large(r, primes, effort);
        return;
    }
    const std::uint64_t f = u64ops::pollard_rho(v, effort);
    if (f == 0) throw incomplete_factorization("search: cofactor resisted factoring");
    split_large(f, primes, effort);
    split_large(v / f, primes, effort);
}

unsigned distinct_large(std::uint64_t cof, const FactorEffort& effort) {
    if (cof == 1) return 0;
    if (is_prime_u64(cof)) return 1;
    std::vector<std::uint64_t> ps;
    split_large(cof, ps, effort);
    std::sort(ps.begin(), ps.end());
    return static_cast<unsigned>(std::unique(ps.begin(), ps.end()) - ps.begin());
}

ExceptionRecord make_record_u64(const CaseConstraints& c, std::uint64_t p, std::uint64_t k,
                                const FactorEffort& effort) {
    std::map<std::uint64_t, unsigned> exps;
    for (std::uint64_t q : c.X) exps[q] = 1;
    const Factorization fk = factorize_u64(k, effort);
    for (const auto& pp : fk.factors) exps[to_u64(pp.prime)] += pp.exponent;
    ExceptionRecord rec;
    rec.p = Integer(p);
    rec.p_minus_1.value = rec.p - 1;
    rec.p_minus_1.factors.reserve(exps.size());
    for (const auto& [q, e] : exps) rec.p_minus_1.factors.push_back({Integer(q), e});
    rec.constraints = c;
    return rec;
}

void enumerate_u64(const CaseConstraints& c, std::uint64_t prodx, std::uint64_t k_lo,
                   std::uint64_t k_hi, const SearchConfig& config,
                   std::vector<ExceptionRecord>& out) {
    const unsigned need = c.n - static_cast<unsigned>(c.X.size());
    const auto sp = small_primes();
    constexpr std::size_t kSegment = std::size_t(1) << 22;

    std::vector<std::uint64_t> cof;
    std::vector<unsigned char> fresh; // distinct sieved primes outside X
    std::vector<char> alive;

    for (std::uint64_t base = k_lo; base <= k_hi;) {
        const auto len =
            static_cast<std::size_t>(std::min<std::uint64_t>(kSegment, k_hi - base + 1));
        const std::uint64_t end = base + len;
        cof.resize(len);
        for (std::size_t i = 0; i < len; ++i) cof[i] = base + i;
        fresh.assign(len, 0);
        alive.assign(len, 1);

        for (std::uint64_t q : c.Y) {
            for (std::uint64_t m = ((base + q - 1) / q) * q; m < end; m += q)
                alive[static_cast<std::size_t>(m - base)] = 0;
        }

        for (std::uint32_t q32 : sp) {
            const std::uint64_t q = q32;
            std::uint64_t m = ((base + q - 1) / q) * q;
            if (m >= end) continue;
            const bool in_x = std::binary_search(c.X.begin(), c.X.end(), q);
            for (; m < end; m += q) {
                const auto i = static_cast<std::size_t>(m - base);
                std::uint64_t v = cof[i] / q;
                while (v % q == 0) v /= q;
                cof[i] = v;
                if (!in_x) ++fresh[i];
            }
        }

        for (std::size_t i = 0; i < len; ++i) {
            if (!alive[i]) continue;
            const std::uint64_t c0 = cof[i];
            unsigned at_least = fresh[i];
            unsigned at_most = fresh[i];
            if (c0 > 1) {
                at_least += 1;
                // cofactor primes all exceed the sieve limit of 1e6
                at_most += c0 >= 1'000'000'000'000'000'000ull ? 3
                         : c0 >= 1'000'000'000'000ull         ? 2
                                                              : 1;
            }
            if (at_least > need || at_most < need) continue;
            const std::uint64_t k = base + i;
            const std::uint64_t p = k * prodx + 1;
            if (!is_prime_u64(p)) continue;
            if (fresh[i] + distinct_large(c0, config.effort) != need) continue;
            out.push_back(make_record_u64(c, p, k, config.effort));
        }
        base = end;
    }
}

void enumerate_mpz(const CaseConstraints& c, const Integer& prodx, const Integer& k_lo,
                   const Integer& k_hi, const SearchConfig& config,
                   std::vector<ExceptionRecord>& out) {
    const auto trial = first_primes(64);
    for (Integer k = k_lo; k <= k_hi; ++k) {
        bool dead = false;
        for (std::uint64_t q : c.Y) {
            if (mpz_divisible_ui_p(k.get_mpz_t(), q)) {
                dead = true;
                break;
            }
        }
        if (dead) continue;
        const Integer p = k * prodx + 1;
        for (std::uint64_t q : trial) {
            if (std::binary_search(c.X.begin(), c.X.end(), q)) continue;
            if (mpz_divisible_ui_p(p.get_mpz_t(), q) && p != Integer(q)) {
                dead = true;
                break;
            }
        }
        if (dead) continue;
        if (!is_probable_prime(p)) continue;
        Factorization f = factorize(p - 1, config.effort);
        if (f.omega() != c.n) continue;
        ExceptionRecord rec;
        rec.p = p;
        rec.p_minus_1 = std::move(f);
        rec.constraints = c;
        out.push_back(std::move(rec));
    }
}

bool needs_split(const SearchInterval& iv, const Integer& prodx, const SearchConfig& config) {
    return iv.upper - iv.lower > Integer(config.enum_cap) * prodx;
}

std::string describe(const CaseConstraints& c) {
    std::string out = "(n=" + std::to_string(c.n) + ", X={";
    for (std::size_t i = 0; i < c.X.size(); ++i)
        out += (i ? "," : "") + std::to_string(c.X[i]);
    out += "}, Y={";
    for (std::size_t i = 0; i < c.Y.size(); ++i)
        out += (i ? "," : "") + std::to_string(c.Y[i]);
    return out + "})";
}

} // namespace

std::pair<SieveParams, long double> best_sieve_params(unsigned n, const std::vector<std::uint64_t>& Y,
                                                      const Integer&) {
    if (n == 0) throw std::invalid_argument("best_sieve_params: n must be >= 1");
    check_sorted_primes(Y, "Y");
    const auto L = sieve_primes(n, Y);

    std::optional<SieveParams> best;
    long double best_u = 0;
    for (unsigned s = 1; s < n; ++s) {
        long double sum = 0;
        for (auto it = L.end() - s; it != L.end(); ++it)
            sum = nudge_up(sum + nudge_up(1.0L / static_cast<long double>(*it)));
        const long double delta = nudge_down(1.0L - sum);
        if (!(delta > 0)) continue;
        long double u;
        try {
            u = solve_threshold(n, s, delta, 16.0L);
        } catch (const unbounded_case&) {
            continue;
        }
        if (!best || u < best_u) {
            best = SieveParams{n, s, delta, {L.end() - s, L.end()}, L};
            best_u = u;
        }
    }
    if (!best) throw unbounded_case("best_sieve_params: no admissible s gives a finite threshold");
    return {*best, best_u};
}

SearchInterval derive_interval(const SieveParams& params, long double threshold,
                               const SearchConfig& config) {
    SearchInterval iv;
    iv.lower = product_of(params.L) + 1;
    if (iv.lower < config.floor) iv.lower = config.floor;
    iv.upper = integer_ceil(threshold);
    return iv;
}

std::vector<ExceptionRecord> enumerate_candidates(const CaseConstraints& constraints,
                                                  const SearchInterval& interval,
                                                  const SearchConfig& config) {
    validate_constraints(constraints);
    std::vector<ExceptionRecord> out;
    if (interval.empty()) return out;
    const Integer prodx = product_of(constraints.X);
    if (needs_split(interval, prodx, config))
        throw must_split("enumerate_candidates: candidate range exceeds the enumeration cap");
    if (constraints.X.size() > constraints.n) return out;
    const auto range = k_range(interval.lower, interval.upper, prodx);
    if (!range) return out;

    if (fits_u64(interval.upper) && to_u64(interval.upper) <= (std::uint64_t(1) << 62)) {
        enumerate_u64(constraints, to_u64(prodx), to_u64(range->lo), to_u64(range->hi), config,
                      out);
    } else {
        enumerate_mpz(constraints, prodx, range->lo, range->hi, config, out);
    }
    return out;
}

std::vector<ExceptionRecord> grosswald_recurse(const CaseConstraints& constraints,
                                               const SearchConfig& config,
                                               const std::function<void(const CaseLine&)>& on_case) {
    validate_constraints(constraints);

    struct Leaf {
        CaseConstraints c;
        SearchInterval iv;
    };
    std::vector<Leaf> leaves;

    std::function<void(const CaseConstraints&)> visit = [&](const CaseConstraints& c) {
        auto [params, threshold] = [&] {
            try {
                return best_sieve_params(c.n, c.Y, config.floor);
            } catch (const unbounded_case& e) {
                throw unbounded_case(std::string(e.what()) + " at " + describe(c));
            }
        }();
        const SearchInterval iv = derive_interval(params, threshold, config);
        CaseLine line;
        line.constraints = c;
        line.params = params;
        line.lower = iv.lower;
        line.upper = iv.upper;

        if (iv.empty()) {
            line.action = CaseLine::Action::nothing;
            if (on_case) on_case(line);
            return;
        }

        const Integer prodx = product_of(c.X);
        if (needs_split(iv, prodx, config)) {
            line.action = CaseLine::Action::split;
            if (on_case) on_case(line);
            if (c.X.size() + c.Y.size() >= config.max_case_primes)
                throw cap_exceeded("grosswald_recurse: case split exceeds max_case_primes");
            const std::uint64_t q = first_primes(c.X.size() + c.Y.size() + 1).back();
            CaseConstraints with = c;
            with.X.push_back(q);
            visit(with);
            CaseConstraints without = c;
            without.Y.push_back(q);
            visit(without);
            return;
        }

        line.action = CaseLine::Action::enumerate;
        if (const auto range = k_range(iv.lower, iv.upper, prodx))
            line.candidates = to_u64(Integer(range->hi - range->lo + 1));
        if (on_case) on_case(line);
        leaves.push_back({c, iv});
    };
    visit(constraints);

    std::vector<std::vector<ExceptionRecord>> slots(leaves.size());
    detail::parallel_for(leaves.size(), config.threads, [&](std::size_t i) {
        slots[i] = enumerate_candidates(leaves[i].c, leaves[i].iv, config);
    });

    std::vector<ExceptionRecord> all;
    for (auto& s : slots) {
        all.insert(all.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
    }
    std::sort(all.begin(), all.end(),
              [](const ExceptionRecord& a, const ExceptionRecord& b) { return a.p < b.p; });
    return all;
}

CaseReport run_case(unsigned n, const SearchConfig& config) {
    if (n == 0) throw std::invalid_argument("run_case: n must be >= 1");
    CaseReport report;
    report.n = n;

    const CaseConstraints root{n, {2}, {}};
    auto records = grosswald_recurse(root, config,
                                     [&](const CaseLine& line) { report.lines.push_back(line); });

    detail::parallel_for(records.size(), config.threads, [&](std::size_t i) {
        ExceptionRecord& rec = records[i];
        rec.p_minus_1.validate();
        if (rec.p_minus_1.value != rec.p - 1)
            throw std::logic_error("run_case: factorization does not match p - 1");
        if (rec.p_minus_1.omega() != n)
            throw std::logic_error("run_case: record has the wrong number of prime factors");
        for (std::uint64_t q : rec.constraints.X)
            if (!mpz_divisible_ui_p(rec.p_minus_1.value.get_mpz_t(), q))
                throw std::logic_error("run_case: required divisor missing from p - 1");
        for (std::uint64_t q : rec.constraints.Y)
            if (mpz_divisible_ui_p(rec.p_minus_1.value.get_mpz_t(), q))
                throw std::logic_error("run_case: excluded divisor present in p - 1");
        rec.report = grosswald_check(rec.p);
    });

    report.verdict_holds = true;
    for (const auto& rec : records)
        if (!rec.report->passes_g_hat) report.verdict_holds = false;
    report.assumptions =
        records.empty() ? Assumptions::grh_conditional : Assumptions::mixed;
    report.exceptions = std::move(records);
    return report;
}

} // namespace grosswald
