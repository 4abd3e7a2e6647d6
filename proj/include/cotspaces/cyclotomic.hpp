#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigfloat.hpp"
#include "exact.hpp"

namespace cotspaces {

struct DivisionByZeroError : std::domain_error {
    DivisionByZeroError() : std::domain_error("division by zero in Q(zeta_n)") {}
};

// Cyclotomic polynomial Phi_n: monic over Z, degree phi(n), divides x^n - 1.
struct CycloPoly {
    std::uint64_t n = 1;
    std::vector<Integer> coeffs;  // coeffs[i] multiplies x^i; size = phi(n) + 1

    std::uint64_t degree() const { return coeffs.size() - 1; }
};

namespace detail {

// Exact division of integer polynomials, divisor monic. Throws if the
// division leaves a remainder.
inline std::vector<Integer> poly_divide_exact(std::vector<Integer> num,
                                              const std::vector<Integer>& den) {
    if (den.empty() || den.back() != 1)
        throw std::logic_error("poly_divide_exact: divisor must be monic");
    if (num.size() < den.size()) throw std::logic_error("poly_divide_exact: degree underflow");
    std::vector<Integer> quot(num.size() - den.size() + 1);
    for (std::size_t i = quot.size(); i-- > 0;) {
        Integer c = num[i + den.size() - 1];
        quot[i] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    for (const Integer& c : num)
        if (c != 0) throw std::logic_error("poly_divide_exact: nonzero remainder");
    return quot;
}

inline std::vector<Integer> poly_mul_int(const std::vector<Integer>& a,
                                         const std::vector<Integer>& b) {
    std::vector<Integer> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

inline std::optional<std::vector<Integer>> load_cyclo_from_cache(std::uint64_t n,
                                                                 std::uint64_t phi) {
    const char* dir = std::getenv("COTSPACES_CACHE_DIR");
    if (!dir) return std::nullopt;
    std::ifstream in(std::string(dir) + "/cyclotomic_" + std::to_string(n) + ".txt");
    if (!in) return std::nullopt;
    std::vector<Integer> coeffs;
    std::string tok;
    while (in >> tok) coeffs.emplace_back(tok);
    if (coeffs.size() != phi + 1 || coeffs.back() != 1) return std::nullopt;
    return coeffs;
}

inline void store_cyclo_in_cache(std::uint64_t n, const std::vector<Integer>& coeffs) {
    const char* dir = std::getenv("COTSPACES_CACHE_DIR");
    if (!dir) return;
    std::ofstream out(std::string(dir) + "/cyclotomic_" + std::to_string(n) + ".txt");
    if (!out) return;
    for (const Integer& c : coeffs) out << c << '\n';
}

// Per-field data: Phi_n plus remainder rows x^e mod Phi_n for e in
// [phi, n), so any exponent reduces by one table lookup after e mod n.
struct FieldTable {
    std::uint64_t n;
    std::uint64_t phi;
    CycloPoly poly;
    std::vector<std::vector<Integer>> power_rem;
};

inline const FieldTable& field_table(std::uint64_t n);

inline std::vector<Integer> compute_cyclo_coeffs(std::uint64_t n) {
    if (n == 1) return {Integer(-1), Integer(1)};
    std::vector<Integer> num(n + 1);
    num[0] = -1;
    num[n] = 1;
    std::vector<Integer> den{Integer(1)};
    for (std::uint64_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        den = poly_mul_int(den, field_table(d).poly.coeffs);
    }
    return poly_divide_exact(std::move(num), den);
}

inline const FieldTable& field_table(std::uint64_t n) {
    static std::map<std::uint64_t, FieldTable> cache;
    static std::recursive_mutex mtx;
    if (n == 0) throw std::invalid_argument("cyclotomic field index must be >= 1");
    std::lock_guard<std::recursive_mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    FieldTable t;
    t.n = n;
    t.phi = euler_phi(n);
    bool loaded = false;
    if (auto cached = load_cyclo_from_cache(n, t.phi)) {
        // A cached polynomial is only accepted if it still divides x^n - 1.
        try {
            std::vector<Integer> num(n + 1);
            num[0] = -1;
            num[n] = 1;
            poly_divide_exact(std::move(num), *cached);
            t.poly = CycloPoly{n, std::move(*cached)};
            loaded = true;
        } catch (const std::logic_error&) {
            loaded = false;
        }
    }
    if (!loaded) {
        t.poly = CycloPoly{n, compute_cyclo_coeffs(n)};
        store_cyclo_in_cache(n, t.poly.coeffs);
    }

    const auto& c = t.poly.coeffs;
    std::uint64_t phi = t.phi;
    t.power_rem.reserve(n - phi);
    for (std::uint64_t e = phi; e < n; ++e) {
        std::vector<Integer> row(phi);
        if (e == phi) {
            for (std::uint64_t i = 0; i < phi; ++i) row[i] = -c[i];
        } else {
            const auto& prev = t.power_rem.back();
            Integer top = prev[phi - 1];
            for (std::uint64_t i = phi; i-- > 1;) row[i] = prev[i - 1];
            row[0] = 0;
            if (top != 0) {
                const auto& base = t.power_rem.front();
                for (std::uint64_t i = 0; i < phi; ++i) row[i] += top * base[i];
            }
        }
        t.power_rem.push_back(std::move(row));
    }
    return cache.emplace(n, std::move(t)).first->second;
}

}  // namespace detail

inline CycloPoly cyclotomic_poly(std::uint64_t n) { return detail::field_table(n).poly; }

// Element of Q(zeta_n) in the power basis 1, zeta, ..., zeta^{phi(n)-1}
// modulo Phi_n. The representation is unique, so equality is coefficient
// equality. The ambient index n is explicit and never auto-promoted.
class CycloElem {
  public:
    CycloElem() : n_(1), c_(1) {}

    static CycloElem zero(std::uint64_t n) {
        CycloElem x;
        x.n_ = n;
        x.c_.assign(detail::field_table(n).phi, Rational(0));
        return x;
    }

    static CycloElem from_rational(const Rational& r, std::uint64_t n = 1) {
        CycloElem x = zero(n);
        x.c_[0] = r;
        return x;
    }

    // zeta_n^j, any integer j (reduced mod n).
    static CycloElem zeta_power(std::uint64_t n, std::int64_t j) {
        CycloElem x = zero(n);
        std::int64_t m = j % static_cast<std::int64_t>(n);
        if (m < 0) m += static_cast<std::int64_t>(n);
        x.accumulate(static_cast<std::uint64_t>(m), Rational(1));
        return x;
    }

    std::uint64_t conductor() const { return n_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& c : c_)
            if (c != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    Rational rational_part() const { return c_[0]; }

    bool operator==(const CycloElem& o) const {
        require_same_field(o);
        return c_ == o.c_;
    }
    bool operator!=(const CycloElem& o) const { return !(*this == o); }

    CycloElem operator+(const CycloElem& o) const {
        require_same_field(o);
        CycloElem r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
        return r;
    }

    CycloElem operator-(const CycloElem& o) const {
        require_same_field(o);
        CycloElem r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
        return r;
    }

    CycloElem operator-() const {
        CycloElem r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    CycloElem operator*(const CycloElem& o) const {
        require_same_field(o);
        const std::size_t phi = c_.size();
        std::vector<Rational> conv(2 * phi - 1);
        for (std::size_t i = 0; i < phi; ++i) {
            if (c_[i] == 0) continue;
            for (std::size_t j = 0; j < phi; ++j) {
                if (o.c_[j] == 0) continue;
                conv[i + j] += c_[i] * o.c_[j];
            }
        }
        CycloElem r = zero(n_);
        for (std::size_t e = 0; e < conv.size(); ++e) {
            if (conv[e] != 0) r.accumulate(e, conv[e]);
        }
        return r;
    }

    CycloElem operator*(const Rational& s) const {
        CycloElem r = *this;
        for (auto& c : r.c_) c *= s;
        return r;
    }

    CycloElem pow(unsigned e) const {
        CycloElem r = from_rational(Rational(1), n_);
        CycloElem b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // Multiplicative inverse via the extended Euclidean algorithm against
    // Phi_n in Q[x]. Phi_n is irreducible, so any nonzero element inverts.
    CycloElem inverse() const {
        if (is_zero()) throw DivisionByZeroError{};
        const auto& tbl = detail::field_table(n_);
        std::vector<Rational> r0(tbl.poly.coeffs.size());
        for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = Rational(tbl.poly.coeffs[i]);
        std::vector<Rational> r1(c_.begin(), c_.end());
        trim(r1);
        std::vector<Rational> s0{Rational(0)}, s1{Rational(1)};
        while (r1.size() > 1) {
            auto [q, rem] = divmod(r0, r1);
            r0 = std::move(r1);
            r1 = std::move(rem);
            if (r1.empty()) throw std::logic_error("inverse: Phi_n split unexpectedly");
            auto qs1 = mul(q, s1);
            std::vector<Rational> s2 = sub(s0, qs1);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r1 is a nonzero constant c with s1 * elem == c (mod Phi_n).
        Rational c = r1[0];
        CycloElem inv = zero(n_);
        for (std::size_t i = 0; i < s1.size() && i < inv.c_.size(); ++i) inv.c_[i] = s1[i] / c;
        return inv;
    }

    // The same abstract number inside Q(zeta_N), for n | N.
    CycloElem embed(std::uint64_t N) const {
        if (N % n_ != 0)
            throw std::invalid_argument("embed: target index " + std::to_string(N) +
                                        " is not a multiple of " + std::to_string(n_));
        if (N == n_) return *this;
        std::uint64_t stride = N / n_;
        CycloElem r = zero(N);
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] != 0) r.accumulate(j * stride, c_[j]);
        }
        return r;
    }

    // sigma_a : zeta_n -> zeta_n^a, for gcd(a, n) = 1. a = -1 is complex
    // conjugation.
    CycloElem galois(std::int64_t a) const {
        std::int64_t m = a % static_cast<std::int64_t>(n_);
        if (m < 0) m += static_cast<std::int64_t>(n_);
        std::uint64_t am = static_cast<std::uint64_t>(m);
        if (gcd_u64(am == 0 ? n_ : am, n_) != 1)
            throw std::invalid_argument("galois: exponent not coprime to field index");
        CycloElem r = zero(n_);
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] != 0) r.accumulate((j * am) % n_, c_[j]);
        }
        return r;
    }

    // Trace to Q: sum of all Galois conjugates. Asserts the result is a
    // rational constant, which it must be when the arithmetic is sound.
    Rational trace_to_Q() const {
        CycloElem acc = zero(n_);
        for (std::uint64_t a = 1; a <= n_; ++a) {
            if (gcd_u64(a, n_) != 1) continue;
            acc = acc + galois(static_cast<std::int64_t>(a));
        }
        if (!acc.is_rational())
            throw std::logic_error("trace_to_Q: conjugate sum has nonrational coordinates");
        return acc.c_[0];
    }

    // Membership in the maximal real subfield Q(zeta_n)^+.
    bool is_real() const {
        if (n_ <= 2) return true;
        return galois(-1) == *this;
    }

    BigComplex numeric_eval(unsigned precision_bits) const {
        std::lock_guard<std::recursive_mutex> lock(detail::numeric_mutex());
        const unsigned work = precision_bits + kGuardBits;
        BigReal two_pi = 2 * pi_at(work);
        BigComplex acc{real_with_bits(work), real_with_bits(work)};
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            BigReal angle = two_pi * static_cast<unsigned long>(j) / static_cast<unsigned long>(n_);
            BigReal cs = real_with_bits(work);
            BigReal sn = real_with_bits(work);
            mpfr_sin_cos(sn.backend().data(), cs.backend().data(), angle.backend().data(),
                         MPFR_RNDN);
            BigReal w = to_bigreal(c_[j], work);
            acc += BigComplex(w * cs, w * sn);
        }
        return acc;
    }

    std::string field_name() const { return "Q(zeta_" + std::to_string(n_) + ")"; }

    // Polynomial rendering in z, e.g. "1/3 + 2/3*z".
    std::string render() const {
        std::ostringstream out;
        bool first = true;
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            Rational c = c_[j];
            if (first) {
                if (c < 0) {
                    out << "-";
                    c = -c;
                }
            } else {
                out << (c < 0 ? " - " : " + ");
                if (c < 0) c = -c;
            }
            first = false;
            bool unit_coeff = (c == 1) && j > 0;
            if (!unit_coeff) out << c;
            if (j > 0) {
                if (!unit_coeff) out << "*";
                out << "z";
                if (j > 1) out << "^" << j;
            }
        }
        if (first) out << "0";
        return out.str();
    }

  private:
    std::uint64_t n_;
    std::vector<Rational> c_;

    void require_same_field(const CycloElem& o) const {
        if (n_ != o.n_)
            throw std::invalid_argument("ambient field mismatch: Q(zeta_" + std::to_string(n_) +
                                        ") vs Q(zeta_" + std::to_string(o.n_) +
                                        "); embed first");
    }

    // Adds coeff * zeta^e (any e) reduced into the power basis.
    void accumulate(std::uint64_t e, const Rational& coeff) {
        const auto& tbl = detail::field_table(n_);
        e %= n_;
        if (e < tbl.phi) {
            c_[e] += coeff;
            return;
        }
        const auto& row = tbl.power_rem[e - tbl.phi];
        for (std::uint64_t i = 0; i < tbl.phi; ++i) {
            if (row[i] != 0) c_[i] += coeff * Rational(row[i]);
        }
    }

    static void trim(std::vector<Rational>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    }

    static std::vector<Rational> sub(const std::vector<Rational>& a,
                                     const std::vector<Rational>& b) {
        std::vector<Rational> r(std::max(a.size(), b.size()));
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
        trim(r);
        return r;
    }

    static std::vector<Rational> mul(const std::vector<Rational>& a,
                                     const std::vector<Rational>& b) {
        if (a.empty() || b.empty()) return {};
        std::vector<Rational> r(a.size() + b.size() - 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        }
        trim(r);
        return r;
    }

    static std::pair<std::vector<Rational>, std::vector<Rational>> divmod(
        std::vector<Rational> num, const std::vector<Rational>& den) {
        if (den.empty()) throw std::logic_error("divmod: zero divisor");
        if (num.size() < den.size()) return {{}, std::move(num)};
        std::vector<Rational> quot(num.size() - den.size() + 1);
        for (std::size_t i = quot.size(); i-- > 0;) {
            Rational c = num[i + den.size() - 1] / den.back();
            quot[i] = c;
            if (c == 0) continue;
            for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
        }
        trim(num);
        trim(quot);
        return {std::move(quot), std::move(num)};
    }
};

inline CycloElem operator*(const Rational& s, const CycloElem& x) { return x * s; }

// zeta_n - zeta_n^{-1}; scales i^k cot^{(k-1)} values into Q(zeta_n)^+.
inline CycloElem zeta_minus_inverse(std::uint64_t n) {
    return CycloElem::zeta_power(n, 1) - CycloElem::zeta_power(n, -1);
}

}  // namespace cotspaces
