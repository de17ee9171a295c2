#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "grosswald/search.hpp"
#include "oracles.hpp"

using grosswald::CaseConstraints;
using grosswald::CaseLine;
using grosswald::Integer;
using grosswald::SearchConfig;
using grosswald::SearchInterval;

namespace {

Integer z(std::uint64_t v) {
    Integer r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
    return r;
}

std::vector<std::uint64_t> record_ps(const std::vector<grosswald::ExceptionRecord>& recs) {
    std::vector<std::uint64_t> out;
    for (const auto& r : recs) out.push_back(grosswald::to_u64(r.p));
    return out;
}

// Brute-force reference for enumerate_candidates on a u64 window: all primes
// p in [lo, hi) with every X prime dividing p - 1, no Y prime dividing it,
// and omega(p - 1) = n. Primality by trial division.
std::vector<std::uint64_t> brute_candidates(unsigned n, const std::vector<std::uint64_t>& X,
                                            const std::vector<std::uint64_t>& Y,
                                            std::uint64_t lo, std::uint64_t hi) {
    const auto base = oracle::primes_upto(
        static_cast<std::uint32_t>(std::sqrt(static_cast<double>(hi))) + 2);
    auto is_prime = [&](std::uint64_t v) {
        if (v < 2) return false;
        for (std::uint64_t q : base) {
            if (q * q > v) break;
            if (v % q == 0) return v == q;
        }
        return true;
    };
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = lo; p < hi; ++p) {
        if (p < 3) continue;
        bool ok = true;
        for (std::uint64_t q : X)
            if ((p - 1) % q != 0) ok = false;
        for (std::uint64_t q : Y)
            if ((p - 1) % q == 0) ok = false;
        if (!ok || !is_prime(p)) continue;
        if (oracle::trial_factor(p - 1).size() != n) continue;
        out.push_back(p);
    }
    return out;
}

SearchInterval interval(std::uint64_t lo, std::uint64_t hi) {
    return SearchInterval{z(lo), z(hi)};
}

// Key a case by its constraint sets so tree walks can look lines up.
using CaseKey = std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>;

CaseKey key_of(const CaseConstraints& c) { return {c.X, c.Y}; }

// Follows the divisibility profile of p through the split tree to its leaf.
const CaseLine& walk_to_leaf(const std::map<CaseKey, CaseLine>& tree, const Integer& p) {
    CaseConstraints cur;
    cur.X = {2};
    const Integer pm1 = p - 1;
    for (;;) {
        const auto it = tree.find(key_of(cur));
        REQUIRE(it != tree.end());
        if (it->second.action != CaseLine::Action::split) return it->second;
        const std::uint64_t q = grosswald::first_primes(cur.X.size() + cur.Y.size() + 1).back();
        if (mpz_divisible_ui_p(pm1.get_mpz_t(), static_cast<unsigned long>(q)))
            cur.X.push_back(q);
        else
            cur.Y.push_back(q);
    }
}

} // namespace

TEST_CASE("enumerate_candidates worked examples") {
    SearchConfig cfg;
    CaseConstraints c;
    c.n = 2;
    c.X = {2};

    auto recs = grosswald::enumerate_candidates(c, interval(5, 30), cfg);
    CHECK(record_ps(recs) == std::vector<std::uint64_t>{7, 11, 13, 19, 23, 29});
    for (const auto& r : recs) {
        CHECK_FALSE(r.report.has_value());
        CHECK(r.constraints.X == c.X);
        r.p_minus_1.validate();
        CHECK(r.p_minus_1.value == r.p - 1);
        CHECK(r.p_minus_1.omega() == 2);
    }

    c.Y = {3};
    CHECK(record_ps(grosswald::enumerate_candidates(c, interval(5, 30), cfg)) ==
          std::vector<std::uint64_t>{11, 23, 29});

    c.Y.clear();
    CHECK(grosswald::enumerate_candidates(c, interval(5, 5), cfg).empty());
    CHECK(grosswald::enumerate_candidates(c, interval(30, 5), cfg).empty());

    // |X| > n can never produce omega(p - 1) = n.
    CaseConstraints tight;
    tight.n = 1;
    tight.X = {2, 3};
    CHECK(grosswald::enumerate_candidates(tight, interval(5, 1000), cfg).empty());
}

TEST_CASE("enumerate_candidates matches brute force on u64 windows") {
    SearchConfig cfg;

    CaseConstraints c3;
    c3.n = 3;
    c3.X = {2};
    CHECK(record_ps(grosswald::enumerate_candidates(c3, interval(10'000'000, 10'100'000), cfg)) ==
          brute_candidates(3, {2}, {}, 10'000'000, 10'100'000));

    CaseConstraints c4;
    c4.n = 4;
    c4.X = {2, 5};
    c4.Y = {3};
    CHECK(record_ps(grosswald::enumerate_candidates(c4, interval(10'000'000, 10'100'000), cfg)) ==
          brute_candidates(4, {2, 5}, {3}, 10'000'000, 10'100'000));

    CaseConstraints c1;
    c1.n = 1;
    c1.X = {2};
    CHECK(record_ps(grosswald::enumerate_candidates(c1, interval(3, 100'000), cfg)) ==
          brute_candidates(1, {2}, {}, 3, 100'000)); // Fermat primes: 2^k + 1
}

TEST_CASE("enumerate_candidates wide-integer path agrees with 64-bit factoring") {
    // An interval past 2^62 forces the arbitrary-precision loop.
    const std::uint64_t lo = (std::uint64_t{1} << 62) + 1;
    const std::uint64_t hi = lo + 20'000;
    SearchConfig cfg;
    CaseConstraints c;
    c.n = 3;
    c.X = {2};

    std::vector<std::uint64_t> want;
    for (std::uint64_t p = lo; p < hi; ++p) {
        if (p % 2 == 0) continue;
        if (!grosswald::is_prime_u64(p)) continue;
        if (grosswald::factorize_u64(p - 1).omega() == 3) want.push_back(p);
    }
    CHECK(record_ps(grosswald::enumerate_candidates(c, interval(lo, hi), cfg)) == want);
}

TEST_CASE("enumerate_candidates splits when the range is too large") {
    SearchConfig cfg;
    cfg.enum_cap = 1000;
    CaseConstraints c;
    c.n = 2;
    c.X = {2};

    // upper - lower == enum_cap * product(X) is the largest admissible range.
    CHECK_NOTHROW(grosswald::enumerate_candidates(c, interval(5, 5 + 2000), cfg));
    CHECK_THROWS_AS(grosswald::enumerate_candidates(c, interval(5, 5 + 2001), cfg),
                    grosswald::must_split);
}

TEST_CASE("constraint validation") {
    SearchConfig cfg;
    auto run = [&](unsigned n, std::vector<std::uint64_t> X, std::vector<std::uint64_t> Y) {
        CaseConstraints c;
        c.n = n;
        c.X = std::move(X);
        c.Y = std::move(Y);
        return grosswald::enumerate_candidates(c, interval(5, 30), cfg);
    };
    CHECK_THROWS_AS(run(0, {2}, {}), std::invalid_argument);
    CHECK_THROWS_AS(run(2, {3}, {}), std::invalid_argument);      // union skips 2
    CHECK_THROWS_AS(run(2, {2}, {2}), std::invalid_argument);     // overlap
    CHECK_THROWS_AS(run(2, {2, 5}, {}), std::invalid_argument);   // gap at 3
    CHECK_THROWS_AS(run(2, {3, 2}, {}), std::invalid_argument);   // unsorted
    CHECK_THROWS_AS(run(2, {2, 4}, {}), std::invalid_argument);   // composite
    CHECK_NOTHROW(run(2, {2}, {3}));
    // Excluding 2 from p - 1 forces p even, so the case is legal but barren.
    CHECK(run(2, {}, {2, 3}).empty());
}

TEST_CASE("best_sieve_params anchors") {
    const Integer lower = 16;

    auto [p15, u15] = grosswald::best_sieve_params(15, {}, lower);
    CHECK(p15.n == 15);
    CHECK(p15.s == 12);
    CHECK(std::fabs(p15.delta - 0.37168681631753697L) <= 1e-12L);
    CHECK(p15.L == grosswald::first_primes(15));
    REQUIRE(p15.M.size() == 12);
    CHECK(p15.M.front() == 7);
    CHECK(p15.M.back() == 47);
    CHECK(u15 <= 3.3e16L);
    CHECK(std::fabs(u15 - 3.2e16L) <= 0.005L * 3.2e16L);

    auto [p14, u14] = grosswald::best_sieve_params(14, {}, lower);
    CHECK(p14.s == 11);
    CHECK(std::fabs(p14.delta - 0.3929634120622178L) <= 1e-12L);
    CHECK(std::fabs(u14 - 1.71e16L) <= 0.01L * 1.71e16L);

    auto [p12, u12] = grosswald::best_sieve_params(12, {}, lower);
    CHECK(p12.s == 10);
    CHECK(u12 < u14);

    // The lower argument must not influence the choice.
    auto [p15b, u15b] = grosswald::best_sieve_params(15, {}, Integer("1000000000000000000000000000000"));
    CHECK(p15b.s == p15.s);
    CHECK(p15b.delta == p15.delta);
    CHECK(u15b == u15);

    // Excluding 3 moves the prime pool: L = first 14 primes without 3.
    auto [p14y, u14y] = grosswald::best_sieve_params(14, {3}, lower);
    CHECK(p14y.L.front() == 2);
    CHECK(p14y.L[1] == 5);
    CHECK(p14y.L.size() == 14);
    CHECK(p14y.L.back() == 47);
    CHECK(p14y.delta > 0);
    CHECK(u14y > 0);

    CHECK_THROWS_AS(grosswald::best_sieve_params(0, {}, lower), std::invalid_argument);
    CHECK_THROWS_AS(grosswald::best_sieve_params(1, {}, lower), grosswald::unbounded_case);
}

TEST_CASE("best_sieve_params s pattern across n") {
    for (unsigned n = 7; n <= 28; ++n) {
        const auto [params, u] = grosswald::best_sieve_params(n, {}, Integer(16));
        (void)u;
        const unsigned want = n <= 12 ? n - 2 : n - 3;
        CHECK_MESSAGE(params.s == want, "n=", n, " got s=", params.s);
    }
}

TEST_CASE("derive_interval endpoints") {
    SearchConfig cfg;
    const auto [params, threshold] = grosswald::best_sieve_params(14, {}, cfg.floor);

    const auto iv = grosswald::derive_interval(params, threshold, cfg);
    CHECK(iv.lower == Integer("13082761331670031")); // primorial(14) + 1 beats the floor
    CHECK(iv.upper == grosswald::integer_ceil(threshold));
    CHECK_FALSE(iv.empty());

    const auto [p12, t12] = grosswald::best_sieve_params(12, {}, cfg.floor);
    const auto iv12 = grosswald::derive_interval(p12, t12, cfg);
    CHECK(iv12.lower == cfg.floor); // primorial(12) + 1 < 2e15
    CHECK_FALSE(iv12.empty());

    const auto [p15, t15] = grosswald::best_sieve_params(15, {}, cfg.floor);
    const auto iv15 = grosswald::derive_interval(p15, t15, cfg);
    CHECK(iv15.lower == grosswald::primorial(15) + 1);
    CHECK(iv15.empty()); // 6.1e17 lower bound vs 3.2e16 threshold

    SearchConfig high;
    high.floor = Integer("100000000000000000000"); // 1e20
    const auto ivh = grosswald::derive_interval(params, threshold, high);
    CHECK(ivh.lower == high.floor);
    CHECK(ivh.empty());
}

TEST_CASE("the n = 14 case tree closes with one enumeration") {
    SearchConfig cfg;
    std::vector<CaseLine> lines;
    CaseConstraints root;
    root.n = 14;
    root.X = {2};

    const auto recs = grosswald::grosswald_recurse(root, cfg, [&](const CaseLine& l) {
        lines.push_back(l);
    });
    CHECK(recs.empty());
    REQUIRE(lines.size() == 19);

    CHECK(lines.front().constraints.X == std::vector<std::uint64_t>{2});
    CHECK(lines.front().constraints.Y.empty());
    CHECK(lines.front().action == CaseLine::Action::split);
    CHECK(lines.front().lower == Integer("13082761331670031"));
    const long double upper = lines.front().upper.get_d();
    CHECK(std::fabs(upper - 1.71e16L) <= 0.01L * 1.71e16L);

    std::size_t enumerates = 0, splits = 0, nothings = 0;
    for (const auto& l : lines) {
        if (l.action == CaseLine::Action::enumerate) {
            ++enumerates;
            CHECK(l.constraints.X == grosswald::first_primes(10)); // {2, ..., 29}
            CHECK(l.constraints.Y.empty());
            CHECK(l.candidates == 622254);
        } else if (l.action == CaseLine::Action::split) {
            ++splits;
        } else {
            ++nothings;
            CHECK(l.upper <= l.lower);
            CHECK_FALSE(l.constraints.Y.empty()); // only Y branches die by bound
        }
    }
    CHECK(enumerates == 1);
    CHECK(splits == 9);
    CHECK(nothings == 9);
}

TEST_CASE("the n = 15 root case is empty") {
    SearchConfig cfg;
    std::vector<CaseLine> lines;
    CaseConstraints root;
    root.n = 15;
    root.X = {2};
    const auto recs = grosswald::grosswald_recurse(root, cfg, [&](const CaseLine& l) {
        lines.push_back(l);
    });
    CHECK(recs.empty());
    REQUIRE(lines.size() == 1);
    CHECK(lines.front().action == CaseLine::Action::nothing);
}

TEST_CASE("recursion failure modes") {
    SearchConfig cfg;
    CaseConstraints root;
    root.n = 12;
    root.X = {2};

    SearchConfig tiny = cfg;
    tiny.max_case_primes = 3;
    CHECK_THROWS_AS(grosswald::grosswald_recurse(root, tiny), grosswald::cap_exceeded);

    CaseConstraints impossible;
    impossible.n = 1;
    impossible.X = {2};
    try {
        grosswald::grosswald_recurse(impossible, cfg);
        FAIL("expected unbounded_case");
    } catch (const grosswald::unbounded_case& e) {
        const std::string msg = e.what();
        CHECK(msg.find("n=1") != std::string::npos);
        CHECK(msg.find("X={2}") != std::string::npos);
    }
}

TEST_CASE("the n = 13 search is deterministic across thread counts") {
    CaseConstraints root;
    root.n = 13;
    root.X = {2};

    SearchConfig one;
    one.threads = 1;
    std::vector<CaseLine> lines1;
    const auto recs1 = grosswald::grosswald_recurse(root, one, [&](const CaseLine& l) {
        lines1.push_back(l);
    });

    SearchConfig four;
    four.threads = 4;
    std::vector<CaseLine> lines4;
    const auto recs4 = grosswald::grosswald_recurse(root, four, [&](const CaseLine& l) {
        lines4.push_back(l);
    });

    CHECK(recs1.size() == 6916);
    REQUIRE(recs1.size() == recs4.size());
    for (std::size_t i = 0; i < recs1.size(); ++i) {
        CHECK(recs1[i].p == recs4[i].p);
        CHECK(recs1[i].constraints.X == recs4[i].constraints.X);
        CHECK(recs1[i].constraints.Y == recs4[i].constraints.Y);
    }
    REQUIRE(lines1.size() == lines4.size());
    for (std::size_t i = 0; i < lines1.size(); ++i) {
        CHECK(lines1[i].constraints.X == lines4[i].constraints.X);
        CHECK(lines1[i].action == lines4[i].action);
        CHECK(lines1[i].lower == lines4[i].lower);
        CHECK(lines1[i].upper == lines4[i].upper);
        CHECK(lines1[i].candidates == lines4[i].candidates);
    }
}

TEST_CASE("every n = 12 record lands in exactly the leaf its profile selects") {
    CaseConstraints root;
    root.n = 12;
    root.X = {2};
    SearchConfig cfg;

    std::map<CaseKey, CaseLine> tree;
    std::vector<CaseLine> lines;
    const auto recs = grosswald::grosswald_recurse(root, cfg, [&](const CaseLine& l) {
        lines.push_back(l);
        tree.emplace(key_of(l.constraints), l);
    });
    REQUIRE(tree.size() == lines.size()); // constraint sets are unique per node
    REQUIRE(!recs.empty());

    CHECK(std::is_sorted(recs.begin(), recs.end(),
                         [](const auto& a, const auto& b) { return a.p < b.p; }));
    for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i - 1].p != recs[i].p);

    for (std::size_t i = 0; i < recs.size(); i += 97) {
        const auto& r = recs[i];
        const CaseLine& leaf = walk_to_leaf(tree, r.p);
        CHECK(leaf.action == CaseLine::Action::enumerate);
        CHECK(leaf.constraints.X == r.constraints.X);
        CHECK(leaf.constraints.Y == r.constraints.Y);
        CHECK(r.p >= leaf.lower);
        CHECK(r.p < leaf.upper);
        r.p_minus_1.validate();
        CHECK(r.p_minus_1.omega() == 12);
    }

    // Exhaustive sweep of small windows around sampled records: a prime with
    // omega(p - 1) = 12 belongs to the output exactly when it falls below its
    // leaf's threshold. (Everything below the leaf's lower end is impossible:
    // p - 1 is at least the product of the 12 smallest primes outside Y.)
    std::vector<std::uint64_t> ps = record_ps(recs);
    for (std::size_t i = 350; i < ps.size(); i += 2400) {
        const std::uint64_t center = ps[i];
        for (std::uint64_t p = center - 400; p < center + 400; p += 2) {
            if (!grosswald::is_prime_u64(p)) continue;
            if (grosswald::factorize_u64(p - 1).omega() != 12) continue;
            const CaseLine& leaf = walk_to_leaf(tree, z(p));
            const bool expect = leaf.action == CaseLine::Action::enumerate &&
                                z(p) >= leaf.lower && z(p) < leaf.upper;
            const bool found = std::binary_search(ps.begin(), ps.end(), p);
            CHECK_MESSAGE(found == expect, "window membership wrong at p=", p);
        }
    }
}

TEST_CASE("run_case verifies its own records") {
    const auto rep = grosswald::run_case(13);
    CHECK(rep.n == 13);
    CHECK(rep.exceptions.size() == 6916);
    CHECK(rep.verdict_holds);
    CHECK(rep.assumptions == grosswald::Assumptions::mixed);
    CHECK(!rep.lines.empty());
    for (const auto& rec : rep.exceptions) {
        REQUIRE(rec.report.has_value());
        CHECK(rec.report->passes_g_hat);
        CHECK(rec.report->p == rec.p);
    }

    const auto empty = grosswald::run_case(15);
    CHECK(empty.exceptions.empty());
    CHECK(empty.verdict_holds);
    CHECK(empty.assumptions == grosswald::Assumptions::grh_conditional);

    CHECK_THROWS_AS(grosswald::run_case(0), std::invalid_argument);
}
