#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "grosswald/proots.hpp"
#include "oracles.hpp"

using grosswald::Integer;
using grosswald::RootMode;

namespace {

Integer z(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

std::vector<Integer> prime_integers(std::uint64_t e) {
    std::vector<Integer> out;
    for (const auto& [q, k] : oracle::trial_factor(e)) {
        (void)k;
        out.push_back(z(q));
    }
    return out;
}

} // namespace

TEST_CASE("is_e_free worked examples") {
    const auto f6 = grosswald::factorize(6);
    CHECK(grosswald::is_e_free(3, 7, {2}, f6));       // 3 is not a square mod 7
    CHECK_FALSE(grosswald::is_e_free(2, 7, {2}, f6)); // 2 = 3^2 mod 7
    const auto f12 = grosswald::factorize(12);
    CHECK(grosswald::is_e_free(2, 13, {2, 3}, f12));
    CHECK(grosswald::is_e_free(3, 7, {}, f6)); // no prime constraints: vacuous

    CHECK_THROWS_AS(grosswald::is_e_free(2, 7, {5}, f6), std::invalid_argument);
    CHECK_THROWS_AS(grosswald::is_e_free(7, 7, {2}, f6), std::invalid_argument);
    CHECK_THROWS_AS(grosswald::is_e_free(14, 7, {2}, f6), std::invalid_argument);
    CHECK_THROWS_AS(grosswald::is_e_free(2, 13, {2}, f6), std::invalid_argument);
}

TEST_CASE("is_e_free matches exhaustive power-residue search") {
    for (std::uint32_t p : oracle::primes_upto(500)) {
        if (p == 2) continue;
        const auto pm1 = grosswald::factorize(p - 1);
        const auto divisors = oracle::divisors_of(p - 1);

        // solvable[a] per divisor d > 1: some y has y^d = a (mod p)
        std::vector<std::pair<std::uint64_t, std::vector<char>>> tables;
        for (std::uint64_t d : divisors)
            if (d > 1) tables.emplace_back(d, oracle::power_residues(p, d));

        for (std::uint64_t e : divisors) {
            if (e < 2) continue;
            const auto qs = prime_integers(e);
            for (std::uint32_t a = 1; a < p; ++a) {
                bool solvable = false;
                for (const auto& [d, table] : tables)
                    if (e % d == 0 && table[a]) solvable = true;
                const bool got = grosswald::is_e_free(a, p, qs, pm1);
                if (got == solvable)
                    FAIL("is_e_free mismatch at p=", p, " e=", e, " a=", a);
            }
        }
    }
}

TEST_CASE("is_primitive_root worked examples") {
    const auto f6 = grosswald::factorize(6);
    CHECK(grosswald::is_primitive_root(3, 7, f6));
    CHECK_FALSE(grosswald::is_primitive_root(2, 7, f6));
    CHECK(grosswald::is_primitive_root(2, 13, grosswald::factorize(12)));
}

TEST_CASE("is_primitive_root matches multiplicative order, and the count is phi(p-1)") {
    for (std::uint32_t p : oracle::primes_upto(2000)) {
        if (p == 2) continue;
        const auto pm1 = grosswald::factorize(p - 1);
        const auto ord = oracle::order_table(p);
        std::uint64_t count = 0;
        for (std::uint32_t a = 1; a < p; ++a) {
            const bool got = grosswald::is_primitive_root(a, p, pm1);
            const bool want = ord[a] == p - 1;
            if (got != want) FAIL("is_primitive_root mismatch at p=", p, " a=", a);
            if (got) ++count;
        }
        if (count != oracle::phi_of(p - 1)) FAIL("primitive root count wrong for p=", p);
    }
}

TEST_CASE("least roots match an order-walk scan") {
    CHECK(grosswald::least_primitive_root(2) == 1);
    CHECK(grosswald::least_primitive_root(3) == 2);
    CHECK(grosswald::least_primitive_root(7) == 3);
    CHECK(grosswald::least_primitive_root(11) == 2);
    CHECK(grosswald::least_prime_primitive_root(7) == 3);
    CHECK(grosswald::least_prime_primitive_root(11) == 2);

    const auto flags = oracle::prime_flags(2000);
    for (std::uint32_t p : oracle::primes_upto(2000)) {
        if (p == 2) continue;
        std::uint32_t g = 0, ghat = 0;
        for (std::uint32_t a = 2; a < p; ++a) {
            if (oracle::order_walk(a, p) != p - 1) continue;
            if (g == 0) g = a;
            if (flags[a]) {
                ghat = a;
                break;
            }
        }
        CHECK(grosswald::least_primitive_root(p) == z(g));
        CHECK(grosswald::least_prime_primitive_root(p) == z(ghat));
        CHECK(g <= ghat);
    }

    CHECK_THROWS_AS(grosswald::least_primitive_root(15), std::invalid_argument);
    CHECK_THROWS_AS(grosswald::least_prime_primitive_root(4), std::invalid_argument);
    CHECK_THROWS_AS(grosswald::grosswald_check(9), std::invalid_argument);
}

TEST_CASE("grosswald_check verdicts at the classical boundary primes") {
    const auto r409 = grosswald::grosswald_check(409);
    CHECK(r409.p == 409);
    CHECK(r409.g == 21);
    CHECK(r409.g_hat == 29);
    CHECK(r409.threshold_sq == 409);
    CHECK_FALSE(r409.passes_g);     // 23^2 = 529 >= 409
    CHECK_FALSE(r409.passes_g_hat); // 31^2 = 961 >= 409

    const auto r2791 = grosswald::grosswald_check(2791);
    CHECK(r2791.g == 6);
    CHECK(r2791.g_hat == 53);
    CHECK(r2791.passes_g);          // 8^2 = 64 < 2791
    CHECK_FALSE(r2791.passes_g_hat); // 55^2 = 3025 >= 2791

    const auto r7 = grosswald::grosswald_check(7);
    CHECK_FALSE(r7.passes_g);
    CHECK_FALSE(r7.passes_g_hat);

    // Exact integer comparison: passes iff (root + 2)^2 < p.
    for (std::uint32_t p : oracle::primes_upto(3000)) {
        if (p == 2) continue;
        const auto r = grosswald::grosswald_check(p);
        CHECK(r.passes_g == ((r.g + 2) * (r.g + 2) < r.p));
        CHECK(r.passes_g_hat == ((r.g_hat + 2) * (r.g_hat + 2) < r.p));
        CHECK(r.g <= r.g_hat);
    }
}

TEST_CASE("the least primitive root inequality holds above 409 up to 10^4") {
    for (std::uint32_t p : oracle::primes_upto(10000)) {
        if (p <= 409) continue;
        const auto r = grosswald::grosswald_check(p);
        if (!r.passes_g) FAIL("unexpected g failure at ", p);
        if (p > 2791 && !r.passes_g_hat) FAIL("unexpected g_hat failure at ", p);
    }
}

TEST_CASE("verify_range finds the classical exception lists") {
    const std::vector<Integer> ghat_fails =
        grosswald::verify_range(2, 2791, RootMode::g_hat);
    const std::vector<std::uint64_t> want = {3,   5,   7,    11,   13,   17,  23,
                                             41,  47,  71,   109,  191,  271, 311,
                                             313, 337, 409,  1021, 1031, 1811, 2791};
    REQUIRE(ghat_fails.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(ghat_fails[i] == z(want[i]));

    // g-mode: cross-check against direct verdicts; the list ends at 409.
    const auto g_fails = grosswald::verify_range(2, 409, RootMode::g);
    std::vector<Integer> brute;
    for (std::uint32_t p : oracle::primes_upto(409)) {
        if (p == 2) continue;
        if (!grosswald::grosswald_check(p).passes_g) brute.push_back(p);
    }
    CHECK(g_fails == brute);
    CHECK(g_fails.front() == 3);
    CHECK(std::find(g_fails.begin(), g_fails.end(), Integer(5)) != g_fails.end());
    CHECK(std::find(g_fails.begin(), g_fails.end(), Integer(7)) != g_fails.end());
    CHECK(g_fails.back() == 409);
}

TEST_CASE("verify_range is clean above the boundary primes") {
    CHECK(grosswald::verify_range(409, 100000, RootMode::g).empty());
    CHECK(grosswald::verify_range(2791, 100000, RootMode::g_hat).empty());
}

TEST_CASE("verify_range validation") {
    CHECK_THROWS_AS(grosswald::verify_range(409, 409, RootMode::g), std::invalid_argument);
    CHECK_THROWS_AS(grosswald::verify_range(500, 409, RootMode::g), std::invalid_argument);
    CHECK_THROWS_AS(grosswald::verify_range(1, 409, RootMode::g), std::invalid_argument);
    grosswald::VerifyConfig small;
    small.cap = 1000;
    CHECK_THROWS_AS(grosswald::verify_range(2, 2000, RootMode::g, small), std::invalid_argument);
}
