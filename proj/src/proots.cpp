#include "grosswald/proots.hpp"

#include <algorithm>

#include "parallel.hpp"

namespace grosswald {

namespace {

// Exponent tables for the power-residue test: a is a primitive root mod p
// iff a^((p-1)/q) != 1 for every prime q | p - 1.
struct RootTester {
    Integer p;
    bool fits = false;
    std::uint64_t p64 = 0;
    u64ops::Montgomery mont{3};
    std::vector<std::uint64_t> exps64;
    std::vector<Integer> exps;

    RootTester(const Integer& prime, const Factorization& pm1) : p(prime) {
        fits = fits_u64(prime) && to_u64(prime) < (std::uint64_t{1} << 63);
        if (fits) {
            p64 = to_u64(prime);
            mont = u64ops::Montgomery(p64);
            for (const auto& pp : pm1.factors) exps64.push_back((p64 - 1) / to_u64(pp.prime));
        } else {
            const Integer nm1 = prime - 1;
            for (const auto& pp : pm1.factors) exps.push_back(nm1 / pp.prime);
        }
    }

    bool passes_u64(std::uint64_t a) const { // a in [1, p64)
        const std::uint64_t am = mont.to(a);
        for (std::uint64_t e : exps64) {
            if (mont.pow(am, e) == mont.one()) return false;
        }
        return true;
    }

    bool passes(const Integer& a) const {
        if (fits) return passes_u64(to_u64(a % p));
        const Integer r = a % p;
        for (const Integer& e : exps) {
            if (mod_pow(r, e, p) == 1) return false;
        }
        return true;
    }
};

void require_odd_prime(const Integer& p, const char* who) {
    if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_probable_prime(p))
        throw std::invalid_argument(std::string(who) + ": p must be an odd prime");
}

} // namespace

bool is_e_free(const Integer& a, const Integer& p, const std::vector<Integer>& e_primes,
               const Factorization& p_minus_1) {
    if (p < 2) throw std::invalid_argument("is_e_free: p must be prime");
    if (p_minus_1.value != p - 1) throw std::invalid_argument("is_e_free: factorization is not of p - 1");
    Integer r = a % p;
    if (r < 0) r += p;
    if (r == 0) throw std::invalid_argument("is_e_free: a is divisible by p");
    const Integer nm1 = p - 1;
    for (const Integer& q : e_primes) {
        if (q < 2 || !mpz_divisible_p(nm1.get_mpz_t(), q.get_mpz_t()))
            throw std::invalid_argument("is_e_free: " + q.get_str() + " does not divide p - 1");
        if (mod_pow(r, nm1 / q, p) == 1) return false;
    }
    return true;
}

bool is_primitive_root(const Integer& a, const Integer& p, const Factorization& p_minus_1) {
    std::vector<Integer> qs;
    qs.reserve(p_minus_1.factors.size());
    for (const auto& pp : p_minus_1.factors) qs.push_back(pp.prime);
    return is_e_free(a, p, qs, p_minus_1);
}

Integer least_primitive_root(const Integer& p) {
    if (p == 2) return 1;
    require_odd_prime(p, "least_primitive_root");
    const Factorization pm1 = factorize(p - 1);
    RootTester t(p, pm1);
    if (t.fits) {
        for (std::uint64_t a = 2;; ++a) {
            if (t.passes_u64(a)) return Integer(static_cast<unsigned long>(a));
        }
    }
    for (Integer a = 2;; ++a) {
        if (t.passes(a)) return a;
    }
}

Integer least_prime_primitive_root(const Integer& p) {
    require_odd_prime(p, "least_prime_primitive_root");
    const Factorization pm1 = factorize(p - 1);
    RootTester t(p, pm1);
    std::uint64_t q = 0;
    for (;;) {
        q = q < 2 ? 2 : (q == 2 ? 3 : q + 2);
        while (!is_prime_u64(q)) q += 2;
        const Integer qi(static_cast<unsigned long>(q));
        if (qi == p) continue; // not coprime; cannot generate
        if (t.fits ? t.passes_u64(q % t.p64) : t.passes(qi)) return qi;
    }
}

RootReport grosswald_check(const Integer& p) {
    require_odd_prime(p, "grosswald_check");
    const Factorization pm1 = factorize(p - 1);
    RootTester t(p, pm1);

    RootReport rep;
    rep.p = p;
    rep.threshold_sq = p;
    if (t.fits) {
        for (std::uint64_t a = 2;; ++a) {
            if (t.passes_u64(a)) {
                rep.g = Integer(static_cast<unsigned long>(a));
                break;
            }
        }
        std::uint64_t q = 2;
        for (;; q = (q == 2 ? 3 : q + 2)) {
            if (!is_prime_u64(q) || q == t.p64) continue;
            if (t.passes_u64(q % t.p64)) {
                rep.g_hat = Integer(static_cast<unsigned long>(q));
                break;
            }
        }
    } else {
        for (Integer a = 2;; ++a) {
            if (t.passes(a)) {
                rep.g = a;
                break;
            }
        }
        std::uint64_t q = 2;
        for (;; q = (q == 2 ? 3 : q + 2)) {
            if (!is_prime_u64(q)) continue;
            if (t.passes(Integer(static_cast<unsigned long>(q)))) {
                rep.g_hat = Integer(static_cast<unsigned long>(q));
                break;
            }
        }
    }
    rep.passes_g = (rep.g + 2) * (rep.g + 2) < p;
    rep.passes_g_hat = (rep.g_hat + 2) * (rep.g_hat + 2) < p;
    return rep;
}

namespace {

constexpr std::uint64_t kVerifyChunk = std::uint64_t{1} << 20;

// Least mode-root of a u64 prime, using a throwaway tester.
std::uint64_t least_root_u64(std::uint64_t p, RootMode mode) {
    const Factorization pm1 = factorize_u64(p - 1);
    std::vector<std::uint64_t> exps;
    exps.reserve(pm1.factors.size());
    for (const auto& pp : pm1.factors) exps.push_back((p - 1) / to_u64(pp.prime));
    u64ops::Montgomery mt(p);
    auto passes = [&](std::uint64_t a) {
        const std::uint64_t am = mt.to(a);
        for (std::uint64_t e : exps) {
            if (mt.pow(am, e) == mt.one()) return false;
        }
        return true;
    };
    if (mode == RootMode::g) {
        for (std::uint64_t a = 2;; ++a) {
            if (passes(a)) return a;
        }
    }
    std::uint64_t q = 2;
    for (;; q = (q == 2 ? 3 : q + 2)) {
        if (!is_prime_u64(q) || q == p) continue;
        if (passes(q % p)) return q;
    }
}

} // namespace

std::vector<Integer> verify_range(const Integer& lo, const Integer& hi, RootMode mode,
                                  const VerifyConfig& config) {
    if (lo < 2 || !(lo < hi)) throw std::invalid_argument("verify_range: need 2 <= lo < hi");
    if (hi > config.cap) throw std::invalid_argument("verify_range: range exceeds the configured cap");
    if (config.cap > Integer("1000000000000"))
        throw std::invalid_argument("verify_range: cap beyond 10^12 is unsupported");

    const std::uint64_t lo64 = to_u64(lo);
    const std::uint64_t hi64 = to_u64(hi);
    const auto base = small_primes();

    const std::uint64_t first = lo64 + 1;
    const std::size_t chunks = static_cast<std::size_t>((hi64 - first) / kVerifyChunk + 1);
    std::vector<std::vector<Integer>> partial(chunks);

    detail::parallel_for(chunks, detail::resolve_threads(config.threads), [&](std::size_t ci) {
        const std::uint64_t a = first + ci * kVerifyChunk;
        const std::uint64_t b = std::min(hi64, a + kVerifyChunk - 1);
        std::vector<bool> composite(static_cast<std::size_t>(b - a + 1), false);
        for (std::uint32_t q : base) {
            const std::uint64_t qq = static_cast<std::uint64_t>(q) * q;
            if (qq > b) break;
            std::uint64_t start = std::max(qq, (a + q - 1) / q * q);
            for (std::uint64_t m = start; m <= b; m += q) composite[static_cast<std::size_t>(m - a)] = true;
        }
        auto& out = partial[ci];
        for (std::uint64_t p = a; p <= b; ++p) {
            if (composite[static_cast<std::size_t>(p - a)] || p < 3) continue;
            const std::uint64_t root = least_root_u64(p, mode);
            const unsigned __int128 lhs = static_cast<unsigned __int128>(root + 2) * (root + 2);
            if (lhs >= p) out.push_back(Integer(static_cast<unsigned long>(p)));
        }
    });

    std::vector<Integer> out;
    for (auto& part : partial) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

} // namespace grosswald
