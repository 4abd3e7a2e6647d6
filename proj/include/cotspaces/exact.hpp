#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace cotspaces {

// Scalar types of every exact computation. GMP-backed, always canonical:
// mpq_rational keeps gcd(num, den) = 1 and den >= 1.
using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
    bool operator==(const PrimePower&) const = default;
};

// Prime factorization, sorted by prime. Empty for n = 1.
using Factorization = std::vector<PrimePower>;

inline Integer binomial(std::uint64_t n, std::uint64_t k) {
    Integer r;
    mpz_bin_uiui(r.backend().data(), n, k);
    return r;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
    return a / gcd_u64(a, b) * b;
}

inline std::uint64_t pow_u64(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

inline Integer pow_int(const Integer& b, unsigned e) {
    Integer r;
    mpz_pow_ui(r.backend().data(), b.backend().data(), e);
    return r;
}

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; the base set certifies all n < 3.3e24,
// far past anything this library factors.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Trial division. Every emitted prime carries a Miller-Rabin certificate.
inline Factorization factorize(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    Factorization f;
    auto emit = [&](std::uint64_t p, unsigned e) {
        if (!is_prime(p)) throw std::logic_error("factorize: composite factor emitted");
        f.push_back({p, e});
    };
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            emit(p, e);
        }
    }
    for (std::uint64_t p = 7; p * p <= n;) {
        for (std::uint64_t step : {4ULL, 2ULL, 4ULL, 2ULL, 4ULL, 6ULL, 2ULL, 6ULL}) {
            if (p * p > n) break;
            if (n % p == 0) {
                unsigned e = 0;
                while (n % p == 0) {
                    n /= p;
                    ++e;
                }
                emit(p, e);
            }
            p += step;
        }
    }
    if (n > 1) emit(n, 1);
    return f;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("euler_phi: n must be >= 1");
    std::uint64_t phi = n;
    for (const auto& [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

inline int mobius(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("mobius: n must be >= 1");
    int sign = 1;
    for (const auto& [p, e] : factorize(n)) {
        if (e > 1) return 0;
        sign = -sign;
    }
    return sign;
}

// Bernoulli numbers, B_1 = -1/2 convention, via the defining recurrence
// sum_{j=0}^{n} C(n+1,j) B_j = 0. Table is memoized and append-only.
inline Rational bernoulli(unsigned n) {
    static std::vector<Rational> table{Rational(1)};
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    while (table.size() <= n) {
        unsigned m = static_cast<unsigned>(table.size());
        Rational acc(0);
        for (unsigned j = 0; j < m; ++j) acc += Rational(binomial(m + 1, j)) * table[j];
        table.push_back(-acc / Rational(m + 1));
    }
    return table[n];
}

inline Integer factorial(unsigned n) {
    Integer r;
    mpz_fac_ui(r.backend().data(), n);
    return r;
}

// r_k = (i*pi)^{-k} zeta(k) = -B_k 2^{k-1} / k!, the exact rational avatar
// of zeta(k) used throughout. Defined for even k >= 2 only.
inline Rational zeta_norm(unsigned k) {
    if (k < 2 || k % 2 != 0)
        throw std::domain_error("zeta_norm: requires even k >= 2");
    return -bernoulli(k) * Rational(pow_int(Integer(2), k - 1)) / Rational(factorial(k));
}

// Smallest generator of (Z/pe)^x for pe in {2, 4} or an odd prime power.
inline std::uint64_t primitive_root(std::uint64_t pe) {
    if (pe < 2) throw std::invalid_argument("primitive_root: modulus must be >= 2");
    if (pe == 2) return 1;
    if (pe == 4) return 3;
    Factorization f = factorize(pe);
    if (f.size() != 1 || f[0].prime == 2)
        throw std::domain_error("primitive_root: (Z/2^e)^x is not cyclic for e >= 3");
    std::uint64_t phi = euler_phi(pe);
    Factorization phif = factorize(phi);
    for (std::uint64_t g = 2; g < pe; ++g) {
        if (gcd_u64(g, pe) != 1) continue;
        bool generates = true;
        for (const auto& [q, e] : phif) {
            if (powmod_u64(g, phi / q, pe) == 1) {
                generates = false;
                break;
            }
        }
        if (generates) return g;
    }
    throw std::logic_error("primitive_root: no generator found");
}

}  // namespace cotspaces
