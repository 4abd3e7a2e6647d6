#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "bigfloat.hpp"
#include "characters.hpp"
#include "cotangent.hpp"
#include "cyclotomic.hpp"
#include "exact.hpp"

namespace cotspaces {

namespace detail {

inline Integer rising_factorial(unsigned k, unsigned len) {
    Integer r(1);
    for (unsigned i = 0; i < len; ++i) r *= Integer(k + i);
    return r;
}

}  // namespace detail

// zeta(k, x) = sum_{n>=0} (n+x)^{-k} by Euler-Maclaurin: an initial block
// of terms, the integral and half-term corrections at the cut, and a
// Bernoulli tail through B_30. The cut N grows until the first omitted
// tail term (which bounds the remainder, the integrand being completely
// monotone) drops below 2^-(precision+10); arithmetic carries kGuardBits
// extra bits.
inline BigReal hurwitz_zeta(unsigned k, const Rational& x, unsigned precision_bits) {
    if (k < 2) throw std::domain_error("hurwitz_zeta: k must be >= 2");
    std::lock_guard<std::recursive_mutex> lock(detail::numeric_mutex());
    if (x <= 0 || x > 1) throw std::domain_error("hurwitz_zeta: x must lie in (0, 1]");
    if (precision_bits < 64) throw std::invalid_argument("hurwitz_zeta: precision < 64 bits");

    const unsigned work = precision_bits + kGuardBits;
    constexpr unsigned kTailTerms = 15;  // B_2 .. B_30
    const BigReal target = pow2(-static_cast<long>(precision_bits + 10));

    // Remainder coefficient |B_32 / 32!| * (k)_31.
    Rational bound_coeff = bernoulli(2 * kTailTerms + 2) / Rational(factorial(2 * kTailTerms + 2)) *
                           Rational(detail::rising_factorial(k, 2 * kTailTerms + 1));
    if (bound_coeff < 0) bound_coeff = -bound_coeff;

    std::uint64_t cut = std::max<std::uint64_t>(static_cast<std::uint64_t>(0.7 * precision_bits),
                                                std::max<std::uint64_t>(2 * k, 16));
    while (true) {
        BigReal y = to_bigreal(x + Rational(cut), work);
        BigReal bound = to_bigreal(bound_coeff, work) /
                        boost::multiprecision::pow(y, k + 2 * kTailTerms + 1);
        if (bound < target) break;
        cut *= 2;
        if (cut > (1ULL << 32)) throw std::logic_error("hurwitz_zeta: cut runaway");
    }

    BigReal sum = real_with_bits(work);
    for (std::uint64_t n = 0; n < cut; ++n) {
        BigReal t = to_bigreal(x + Rational(n), work);
        sum += 1 / boost::multiprecision::pow(t, k);
    }

    BigReal y = to_bigreal(x + Rational(cut), work);
    BigReal yk = boost::multiprecision::pow(y, k);
    sum += y / (yk * (k - 1));    // integral term y^{1-k} / (k-1)
    sum += 1 / (2 * yk);          // half-term correction

    BigReal ypow = yk * y;        // y^{k + 2j - 1}, starting at j = 1
    for (unsigned j = 1; j <= kTailTerms; ++j) {
        Rational coeff = bernoulli(2 * j) / Rational(factorial(2 * j)) *
                         Rational(detail::rising_factorial(k, 2 * j - 1));
        sum += to_bigreal(coeff, work) / ypow;
        ypow *= y * y;
    }
    return sum;
}

// L(k, chi) = q^{-k} sum_{a=1}^{q} chi(a) zeta(k, a/q).
inline BigComplex dirichlet_L(unsigned k, const DirichletChar& chi, unsigned precision_bits) {
    if (k < 2) throw std::domain_error("dirichlet_L: k must be >= 2");
    std::lock_guard<std::recursive_mutex> lock(detail::numeric_mutex());
    const unsigned work = precision_bits + kGuardBits;
    const std::uint64_t q = chi.modulus();
    BigComplex acc{real_with_bits(work), real_with_bits(work)};
    for (std::uint64_t a = 1; a <= q; ++a) {
        if (!unit_group(q).is_unit(a % q)) continue;
        BigReal hz = hurwitz_zeta(k, Rational(a, q), precision_bits);
        BigComplex w = chi.eval(static_cast<std::int64_t>(a)).numeric_eval(precision_bits);
        acc += w * BigComplex(hz, real_with_bits(work));
    }
    Rational scale(1, pow_int(Integer(q), k));
    BigReal s = to_bigreal(scale, work);
    return {acc.re * s, acc.im * s};
}

// cot^{(k-1)}(pi a / q) as D_k evaluated at a high-precision cot(pi a/q).
inline BigReal cot_derivative_numeric(unsigned k, std::int64_t a, std::uint64_t q,
                                      unsigned precision_bits) {
    std::uint64_t an = detail::normalize_cot_args(k, a, q);
    std::lock_guard<std::recursive_mutex> lock(detail::numeric_mutex());
    const unsigned work = precision_bits + kGuardBits;
    BigReal angle = pi_at(work) * static_cast<unsigned long>(an) / static_cast<unsigned long>(q);
    BigReal sn = real_with_bits(work);
    BigReal cs = real_with_bits(work);
    mpfr_sin_cos(sn.backend().data(), cs.backend().data(), angle.backend().data(), MPFR_RNDN);
    BigReal c = cs / sn;

    DerivPoly d = derivative_poly(k);
    BigReal acc = real_with_bits(work);
    for (std::size_t j = d.coeffs.size(); j-- > 0;) {
        acc = acc * c + to_bigreal(Rational(d.coeffs[j]), work);
    }
    return acc;
}

// |zeta(k,a/q) + (-1)^k zeta(k,1-a/q)  -  pi^k (-1)^{k-1}/(k-1)! cot^{(k-1)}(pi a/q)|
inline BigReal bridge_residual_reflection(unsigned k, std::int64_t a, std::uint64_t q,
                                          unsigned precision_bits) {
    if (k < 2) throw std::domain_error("reflection bridge: k must be >= 2");
    std::lock_guard<std::recursive_mutex> lock(detail::numeric_mutex());
    std::uint64_t an = detail::normalize_cot_args(k, a, q);
    const unsigned work = precision_bits + kGuardBits;
    BigReal lhs = hurwitz_zeta(k, Rational(an, q), precision_bits);
    BigReal rhs_part = hurwitz_zeta(k, Rational(q - an, q), precision_bits);
    lhs = (k % 2 == 0) ? lhs + rhs_part : lhs - rhs_part;

    BigReal pik = boost::multiprecision::pow(pi_at(work), k);
    BigReal scale = pik / to_bigreal(Rational(factorial(k - 1)), work);
    if (k % 2 == 0) scale = -scale;
    BigReal rhs = scale * cot_derivative_numeric(k, a, q, precision_bits);
    return boost::multiprecision::abs(lhs - rhs);
}

// |numeric(C_k(a,q)) - i^k cot^{(k-1)}(pi a/q)|
inline BigReal bridge_residual_representation(unsigned k, std::int64_t a, std::uint64_t q,
                                              unsigned precision_bits) {
    std::lock_guard<std::recursive_mutex> lock(detail::numeric_mutex());
    BigComplex exact_side = cotan_norm(k, a, q).value.numeric_eval(precision_bits);
    BigComplex analytic = i_power_times(k, cot_derivative_numeric(k, a, q, precision_bits));
    return (exact_side - analytic).abs();
}

// |L(k,chi) - pi^k (-1)^{k-1} / (q^k (k-1)!) * (-i)^k numeric(Lambda(k,chi))|
// for chi of the same parity as k.
inline BigReal bridge_residual_lvalue(unsigned k, const DirichletChar& chi,
                                      unsigned precision_bits) {
    if (k < 2) throw std::domain_error("l-value bridge: k must be >= 2");
    if (chi.parity() != (k % 2 == 0 ? 1 : -1))
        throw std::domain_error("l-value bridge: chi and k must have the same parity");
    std::lock_guard<std::recursive_mutex> lock(detail::numeric_mutex());
    const unsigned work = precision_bits + kGuardBits;
    const std::uint64_t q = chi.modulus();

    BigComplex series = dirichlet_L(k, chi, precision_bits);

    BigComplex lam = l_coordinates(k, chi).numeric_eval(precision_bits);
    BigReal pik = boost::multiprecision::pow(pi_at(work), k);
    Rational rat(1, Integer(factorial(k - 1)) * pow_int(Integer(q), k));
    BigReal scale = pik * to_bigreal(rat, work);
    if (k % 2 == 0) scale = -scale;  // (-1)^{k-1}
    // (-i)^k lam, scaled.
    BigComplex rot = (k % 4 == 0)   ? lam
                     : (k % 4 == 1) ? BigComplex(lam.im, -lam.re)
                     : (k % 4 == 2) ? BigComplex(-lam.re, -lam.im)
                                    : BigComplex(-lam.im, lam.re);
    BigComplex finite{scale * rot.re, scale * rot.im};
    return (series - finite).abs();
}

// String-keyed front end for the three bridge kinds.
inline BigReal bridge_residual(const std::string& kind, unsigned k, std::int64_t a,
                               std::uint64_t q, unsigned precision_bits) {
    if (kind == "reflection") return bridge_residual_reflection(k, a, q, precision_bits);
    if (kind == "rep") return bridge_residual_representation(k, a, q, precision_bits);
    throw std::invalid_argument("bridge_residual: unknown kind " + kind);
}

}  // namespace cotspaces
