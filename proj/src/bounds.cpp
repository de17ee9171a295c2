#include "grosswald/bounds.hpp"

#include <cfloat>
#include <cmath>

namespace grosswald {

const char* to_cstring(Assumptions a) {
    switch (a) {
        case Assumptions::grh_conditional: return "GRH-conditional";
        case Assumptions::unconditional: return "unconditional";
        case Assumptions::mixed: return "mixed";
    }
    return "unknown";
}

namespace {

// Directed-rounding slack: a few dozen ulps absorbs every libm evaluation
// error in these short expressions, keeping upper bounds upper bounds.
constexpr long double kSlack = 64 * LDBL_EPSILON;

long double round_up(long double v) {
    return v >= 0 ? v * (1.0L + kSlack) : v * (1.0L - kSlack);
}

long double round_down(long double v) {
    return v >= 0 ? v * (1.0L - kSlack) : v * (1.0L + kSlack);
}

constexpr long double kThresholdCap = 1e60L;
constexpr long double kThresholdDomainMin = 16.0L; // sqrt(p) - 2 >= 1 needs p >= 9
constexpr long double kThresholdMargin = 1e-3L;

} // namespace

long double bach_c(long double p, long double x) {
    if (!(p >= 2)) throw std::invalid_argument("bach_c: p must be >= 2");
    if (!(x >= 1)) throw std::invalid_argument("bach_c: x must be >= 1");
    const long double lp = logl(p);
    const long double sx = sqrtl(x);
    const long double lead = (2.0L / 3) * (1 + 2 / sx + 3 / (x * sx)) * (1 + (5.0L / 3) / lp);
    const long double tail = (logl(x) + 2) / (sx * lp);
    return round_up(lead + tail);
}

BoundEvaluation ankeny_bound(long double p, unsigned omega) {
    if (!(p >= 1e9L)) throw out_of_theorem_range("ankeny_bound: requires p >= 10^9");
    if (omega < 1) throw std::invalid_argument("ankeny_bound: omega must be >= 1");
    const long double root = (8.0L / 5) * (exp2l(omega) - 1) * logl(p);
    BoundEvaluation ev;
    ev.value = round_up(root * root);
    ev.assumptions = Assumptions::grh_conditional;
    ev.inputs.p = p;
    ev.inputs.n = omega;
    return ev;
}

unsigned omega_max_robin(long double bound) {
    if (!(bound >= 3)) throw std::invalid_argument("omega_max_robin: bound must be >= 3");
    const long double q = 1.385L * logl(bound) / logl(logl(bound));
    return static_cast<unsigned>(floorl(round_up(q)));
}

unsigned omega_max_primorial(long double bound) {
    if (!(bound >= 1)) throw std::invalid_argument("omega_max_primorial: bound must be >= 1");
    const Integer cap = integer_floor(bound);
    Integer prod = 1;
    unsigned k = 0;
    for (;;) {
        const std::uint64_t q = first_primes(k + 1)[k];
        prod *= Integer(static_cast<unsigned long>(q));
        if (prod > cap) return k;
        ++k;
    }
}

namespace {

// Least U in [floor_p, cap] with pred true there (pred monotone in p).
// Bisection runs to long double convergence so the result is pinned by the
// formula, not by the bracketing trajectory.
template <typename Pred>
long double solve_monotone(const Pred& pred, long double floor_p, long double domain_min) {
    long double lo = std::max(floor_p, domain_min);
    if (pred(lo)) return std::max(floor_p, domain_min);
    long double hi = lo;
    do {
        lo = hi;
        hi *= 2;
        if (hi > kThresholdCap) throw unbounded_case("no finite threshold below 10^60");
    } while (!pred(hi));
    for (;;) {
        const long double mid = sqrtl(lo) * sqrtl(hi);
        if (!(mid > lo && mid < hi)) break;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace

ShrinkResult shrink_fixpoint(long double start_bound) {
    if (!(start_bound >= 1e9L) || !std::isfinite(start_bound))
        throw invalid_start("shrink_fixpoint: start bound too small");

    // Entry check: with e* = 1.385 log 2 / log log(start), every p >= start
    // must satisfy (8/5 (2^omega - 1) log p)^2 + 2 < sqrt(p) for the worst
    // admissible omega <= e* log p / log 2, and the margin must grow with p.
    const long double l1 = logl(start_bound);
    const long double l2 = logl(l1);
    if (!(l2 > 0)) throw invalid_start("shrink_fixpoint: start bound too small");
    const long double e_star = round_up(1.385L * logl(2.0L) / l2);
    if (!(e_star < 0.25L))
        throw invalid_start("shrink_fixpoint: omega growth rate too large at start");
    const long double worst = round_up((64.0L / 25) * powl(start_bound, 2 * e_star) * l1 * l1);
    if (!(round_down(sqrtl(start_bound)) - worst - 2 > 0))
        throw invalid_start("shrink_fixpoint: tail bound not dominated at start");
    // log-derivative comparison: sqrt(p) must outgrow p^{2e*} log^2 p from the
    // start point on, i.e. 1/2 > 2e* + 2/log p, which only improves as p grows.
    if (!(0.5L > round_up(2 * e_star + 2 / l1)))
        throw invalid_start("shrink_fixpoint: tail margin not increasing at start");

    ShrinkResult out;
    long double p_cur = start_bound;
    unsigned omega_cur = omega_max_primorial(p_cur);
    out.chain.push_back({p_cur, omega_cur});
    for (;;) {
        auto cleared = [&](long double p) {
            const long double b = ankeny_bound(p, omega_cur).value;
            return b < round_down(sqrtl(p) - 2);
        };
        const long double next = solve_monotone(cleared, 1e9L, 1e9L);
        if (!(next < p_cur)) break;
        p_cur = next;
        const unsigned omega_next = omega_max_primorial(p_cur);
        out.chain.push_back({p_cur, omega_next});
        if (omega_next == omega_cur) break; // same omega solves to the same point
        omega_cur = omega_next;
    }
    out.final_p_max = out.chain.back().p_max;
    out.final_omega_max = out.chain.back().omega_max;
    return out;
}

BoundEvaluation sieve_bound(long double p, long double x, unsigned n, unsigned s, long double delta) {
    if (!(delta > 0)) throw std::invalid_argument("sieve_bound: delta must be positive");
    if (s < 1 || s >= n) throw std::invalid_argument("sieve_bound: need 1 <= s <= n-1");
    const long double c = bach_c(p, x); // validates p and x
    const long double root = 2 * c * (2 + (s - 1) / delta) * exp2l(static_cast<long double>(n) - s) * logl(p);
    BoundEvaluation ev;
    ev.value = round_up(root * root);
    ev.assumptions = Assumptions::grh_conditional;
    ev.inputs.p = p;
    ev.inputs.x = x;
    ev.inputs.n = n;
    ev.inputs.s = s;
    ev.inputs.delta = delta;
    return ev;
}

long double table1_constant(long double p0) {
    if (!(p0 >= 100)) throw std::invalid_argument("table1_constant: p0 must be >= 100");
    const long double lp = logl(p0);
    const long double x0 = (16.0L / 3) * lp * (16.0L / 3) * lp;
    const long double v = 2 * bach_c(p0, x0);
    // Round up at the fifth significant digit.
    const int mag = static_cast<int>(floorl(log10l(v)));
    const long double scale = powl(10.0L, 4 - mag);
    return ceill(v * scale) / scale;
}

long double solve_threshold(unsigned n, unsigned s, long double delta, long double floor_p) {
    if (!(delta > 0)) throw std::invalid_argument("solve_threshold: delta must be positive");
    if (s < 1 || s >= n) throw std::invalid_argument("solve_threshold: need 1 <= s <= n-1");
    auto cleared = [&](long double p) {
        const long double x = round_down(sqrtl(p) - 2);
        if (!(x >= 1)) return false;
        return sieve_bound(p, x, n, s, delta).value < x;
    };
    // A fixed 0.1% certification margin on top of the bisected minimum. The
    // margin keeps the returned point safely inside the cleared region and
    // pins the interval boundaries the search derives from it.
    return solve_monotone(cleared, floor_p, kThresholdDomainMin) * (1.0L + kThresholdMargin);
}

} // namespace grosswald
