#include "grosswald/arith.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace grosswald {

namespace {

constexpr std::uint32_t kSmallPrimeLimit = 1'000'000;

// Witnesses making Miller-Rabin deterministic below 3.317e24.
constexpr std::array<std::uint64_t, 13> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
constexpr std::array<std::uint64_t, 12> kExtraWitnesses = {43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

const Integer& deterministic_mr_limit() {
    static const Integer limit("3317044064679887385961981");
    return limit;
}

} // namespace

namespace u64ops {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
    if (m == 1) return 0;
    std::uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

Montgomery::Montgomery(std::uint64_t m) : m_(m) {
    // m odd and below 2^63: keeps REDC's intermediate sum inside 128 bits.
    std::uint64_t inv = m; // Newton iteration for m^{-1} mod 2^64
    for (int i = 0; i < 6; ++i) inv *= 2 - m * inv;
    neg_inv_ = ~inv + 1;
    std::uint64_t r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % m);
    r2_ = mulmod(r, r, m);
    one_ = r;
}

std::uint64_t Montgomery::pow(std::uint64_t base, std::uint64_t exp) const noexcept {
    std::uint64_t r = one_;
    while (exp) {
        if (exp & 1) r = mul(r, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return r;
}

} // namespace u64ops

namespace {

bool mr_witness_u64(const u64ops::Montgomery& mt, std::uint64_t a, std::uint64_t d, int r) {
    const std::uint64_t n = mt.modulus();
    std::uint64_t x = mt.pow(mt.to(a), d);
    const std::uint64_t one = mt.one();
    const std::uint64_t minus_one = mt.sub(0, one);
    if (x == one || x == minus_one) return true;
    for (int i = 1; i < r; ++i) {
        x = mt.mul(x, x);
        if (x == minus_one) return true;
        if (x == one) return false;
    }
    (void)n;
    return false;
}

bool mr_witness_plain(std::uint64_t n, std::uint64_t a, std::uint64_t d, int r) {
    std::uint64_t x = u64ops::powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = u64ops::mulmod(x, x, n);
        if (x == n - 1) return true;
        if (x == 1) return false;
    }
    return false;
}

} // namespace

bool is_prime_u64(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t q : kWitnesses) {
        if (n % q == 0) return n == q;
    }
    if (n < 43 * 43) return true;

    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    if (n < (std::uint64_t{1} << 63)) {
        u64ops::Montgomery mt(n);
        for (std::uint64_t a : kWitnesses) {
            if (!mr_witness_u64(mt, a, d, r)) return false;
        }
    } else {
        for (std::uint64_t a : kWitnesses) {
            if (!mr_witness_plain(n, a, d, r)) return false;
        }
    }
    return true;
}

std::span<const std::uint32_t> small_primes() {
    static const std::vector<std::uint32_t> table = [] {
        std::vector<bool> composite(kSmallPrimeLimit, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i < kSmallPrimeLimit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j < kSmallPrimeLimit; j += i)
                composite[static_cast<std::size_t>(j)] = true;
        }
        return out;
    }();
    return table;
}

std::vector<std::uint64_t> first_primes(std::size_t k) {
    static std::mutex mu;
    static std::vector<std::uint64_t> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (cache.empty()) {
        auto sp = small_primes();
        cache.assign(sp.begin(), sp.end());
    }
    while (cache.size() < k) {
        std::uint64_t c = cache.back() + 1;
        if (c % 2 == 0) ++c;
        while (!is_prime_u64(c)) c += 2;
        cache.push_back(c);
    }
    return {cache.begin(), cache.begin() + k};
}

Integer primorial(std::size_t k) {
    Integer r = 1;
    for (std::uint64_t q : first_primes(k)) r *= Integer(static_cast<unsigned long>(q));
    return r;
}

Integer mod_pow(const Integer& base, const Integer& exp, const Integer& modulus) {
    if (modulus < 2) throw std::invalid_argument("mod_pow: modulus must be >= 2");
    if (base < 0 || exp < 0) throw std::invalid_argument("mod_pow: base and exponent must be nonnegative");
    Integer r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

bool is_probable_prime(const Integer& n) {
    if (n < 1) throw std::invalid_argument("is_probable_prime: n must be >= 1");
    if (fits_u64(n)) return is_prime_u64(to_u64(n));

    // n > 2^64 here, so it exceeds every witness and every tabled prime.
    for (std::uint64_t q : kWitnesses) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q))) return false;
    }
    Integer nm1 = n - 1;
    mp_bitcnt_t r = mpz_scan1(nm1.get_mpz_t(), 0);
    Integer d = nm1 >> r;

    auto witness_ok = [&](std::uint64_t a) {
        Integer x = mod_pow(Integer(static_cast<unsigned long>(a)), d, n);
        if (x == 1 || x == nm1) return true;
        for (mp_bitcnt_t i = 1; i < r; ++i) {
            x = x * x % n;
            if (x == nm1) return true;
            if (x == 1) return false;
        }
        return false;
    };

    for (std::uint64_t a : kWitnesses) {
        if (!witness_ok(a)) return false;
    }
    if (n >= deterministic_mr_limit()) {
        for (std::uint64_t a : kExtraWitnesses) {
            if (!witness_ok(a)) return false;
        }
    }
    return true;
}

namespace {

std::uint64_t isqrt_u64(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

// Brent-cycle rho on an odd composite n < 2^63 with no factor below 10^6.
// Returns 0 when the iteration budget runs out.
std::uint64_t brent_rho_u64(std::uint64_t n, const FactorEffort& effort) {
    u64ops::Montgomery mt(n);
    for (unsigned attempt = 0; attempt < effort.rho_restarts; ++attempt) {
        const std::uint64_t c = mt.to(2 * attempt + 1);
        std::uint64_t y = mt.to(attempt + 2);
        std::uint64_t g = 1, q = mt.one(), x = 0, ys = 0;
        std::uint64_t iters = 0, r = 1;
        const std::uint64_t batch = 128;
        while (g == 1 && iters < effort.rho_iterations) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = mt.add(mt.mul(y, y), c);
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                const std::uint64_t lim = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = mt.add(mt.mul(y, y), c);
                    q = mt.mul(q, mt.sub(x, y));
                }
                // R is coprime to n, so gcd on Montgomery residues is sound.
                g = std::gcd(q, n);
                k += lim;
                iters += lim;
            }
            r *= 2;
        }
        if (g == n) {
            // Backtrack one step at a time to recover the lost factor.
            do {
                ys = mt.add(mt.mul(ys, ys), c);
                g = std::gcd(mt.sub(x, ys), n);
            } while (g == 1);
        }
        if (g > 1 && g < n) return g;
    }
    return 0;
}

// Same scheme over mpz for operands beyond 64 bits.
Integer brent_rho_mpz(const Integer& n, const FactorEffort& effort) {
    for (unsigned attempt = 0; attempt < effort.rho_restarts; ++attempt) {
        const Integer c = 2 * attempt + 1;
        Integer y = attempt + 2;
        Integer g = 1, q = 1, x = 0, ys = 0;
        std::uint64_t iters = 0, r = 1;
        const std::uint64_t batch = 64;
        auto step = [&](Integer& v) { v = (v * v + c) % n; };
        while (g == 1 && iters < effort.rho_iterations) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) step(y);
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                const std::uint64_t lim = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    step(y);
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
                iters += lim;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                step(ys);
                Integer diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g > 1 && g < n) return g;
    }
    return 0;
}

} // namespace

namespace u64ops {

std::uint64_t pollard_rho(std::uint64_t n, const FactorEffort& effort) {
    if (n < 9 || n % 2 == 0) throw std::invalid_argument("pollard_rho: n must be odd and composite");
    return brent_rho_u64(n, effort);
}

} // namespace u64ops

Factorization factorize_u64(std::uint64_t n, const FactorEffort& effort) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    std::map<std::uint64_t, unsigned> found;
    std::uint64_t m = n;
    for (std::uint32_t q : small_primes()) {
        if (static_cast<std::uint64_t>(q) * q > m) break;
        if (m % q == 0) {
            unsigned e = 0;
            do {
                m /= q;
                ++e;
            } while (m % q == 0);
            found[q] += e;
        }
    }
    if (m > 1) {
        if (is_prime_u64(m)) {
            found[m] += 1;
        } else {
            std::vector<std::uint64_t> pending{m};
            while (!pending.empty()) {
                std::uint64_t c = pending.back();
                pending.pop_back();
                if (is_prime_u64(c)) {
                    found[c] += 1;
                    continue;
                }
                std::uint64_t r = isqrt_u64(c);
                if (r * r == c) { // rho struggles on perfect squares
                    pending.push_back(r);
                    pending.push_back(r);
                    continue;
                }
                std::uint64_t f = brent_rho_u64(c, effort);
                if (f == 0 || f == c)
                    throw incomplete_factorization("factorize: effort cap exceeded on " + std::to_string(c));
                pending.push_back(f);
                pending.push_back(c / f);
            }
        }
    }
    Factorization out;
    out.value = Integer(static_cast<unsigned long>(n));
    for (const auto& [p, e] : found) out.factors.push_back({Integer(static_cast<unsigned long>(p)), e});
    return out;
}

Factorization factorize(const Integer& n, const FactorEffort& effort) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    if (fits_u64(n)) return factorize_u64(to_u64(n), effort);

    std::map<Integer, unsigned> found;
    Integer m = n;
    for (std::uint32_t q : small_primes()) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), q)) {
            unsigned e = 0;
            do {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), q);
                ++e;
            } while (mpz_divisible_ui_p(m.get_mpz_t(), q));
            found[Integer(static_cast<unsigned long>(q))] += e;
        }
    }
    if (m > 1) {
        std::vector<Integer> pending{m};
        while (!pending.empty()) {
            Integer c = pending.back();
            pending.pop_back();
            if (fits_u64(c)) {
                for (const auto& pp : factorize_u64(to_u64(c), effort).factors)
                    found[pp.prime] += pp.exponent;
                continue;
            }
            if (is_probable_prime(c)) {
                found[c] += 1;
                continue;
            }
            if (mpz_perfect_square_p(c.get_mpz_t())) {
                Integer r;
                mpz_sqrt(r.get_mpz_t(), c.get_mpz_t());
                pending.push_back(r);
                pending.push_back(r);
                continue;
            }
            Integer f = brent_rho_mpz(c, effort);
            if (f == 0 || f == c)
                throw incomplete_factorization("factorize: effort cap exceeded on " + c.get_str());
            pending.push_back(f);
            pending.push_back(c / f);
        }
    }
    Factorization out;
    out.value = n;
    for (const auto& [p, e] : found) out.factors.push_back({p, e});
    return out;
}

bool Factorization::contains(const Integer& prime) const {
    return std::any_of(factors.begin(), factors.end(), [&](const PrimePower& pp) { return pp.prime == prime; });
}

void Factorization::validate() const {
    Integer prod = 1;
    const Integer* prev = nullptr;
    for (const auto& pp : factors) {
        if (pp.exponent == 0) throw error("Factorization: zero exponent");
        if (prev && !(*prev < pp.prime)) throw error("Factorization: primes not strictly increasing");
        if (!is_probable_prime(pp.prime)) throw error("Factorization: listed factor " + pp.prime.get_str() + " is not prime");
        for (unsigned i = 0; i < pp.exponent; ++i) prod *= pp.prime;
        prev = &pp.prime;
    }
    if (prod != value)
        throw error("Factorization: product mismatch for " + value.get_str());
}

bool fits_u64(const Integer& n) {
    return mpz_sgn(n.get_mpz_t()) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const Integer& n) {
    if (!fits_u64(n)) throw std::invalid_argument("to_u64: value out of range");
    if (mpz_size(n.get_mpz_t()) == 0) return 0;
    return mpz_getlimbn(n.get_mpz_t(), 0);
}

namespace {

// Integral-valued long double -> Integer, exactly (64-bit significand).
Integer integer_from_integral_ld(long double w) {
    if (w < 0 || !std::isfinite(w)) throw std::invalid_argument("integer conversion: need a nonnegative finite value");
    if (w == 0) return 0;
    int e = 0;
    long double m = frexpl(w, &e); // w = m * 2^e, m in [0.5, 1)
    auto hi = static_cast<std::uint64_t>(ldexpl(m, 64));
    Integer r(static_cast<unsigned long>(hi));
    if (e >= 64)
        r <<= (e - 64);
    else
        r >>= (64 - e);
    return r;
}

} // namespace

Integer integer_floor(long double v) {
    return integer_from_integral_ld(floorl(v));
}

Integer integer_ceil(long double v) {
    return integer_from_integral_ld(ceill(v));
}

} // namespace grosswald
