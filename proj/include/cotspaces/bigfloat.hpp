#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>
#include <utility>

#include "exact.hpp"

namespace cotspaces {

namespace detail {

// boost 1.74 keeps the variable-precision default in one process-wide
// atomic that every binary operator saves and restores via a scope guard,
// so concurrent mpfr expressions in different threads corrupt each
// other's result precision. All public entry points that perform BigReal
// arithmetic serialize on this lock; plain seeding (real_with_bits,
// to_bigreal, constants) re-sets the precision explicitly and needs none.
inline std::recursive_mutex& numeric_mutex() {
    static std::recursive_mutex m;
    return m;
}

}  // namespace detail

// Variable-precision real. Precision is carried by the values themselves:
// seed quantities are created at an explicit bit count and every derived
// quantity inherits the precision of its operands, so there is no ambient
// precision state to race on. A fixed budget of guard bits absorbs
// rounding, so a value requested at p bits is trusted to p - kGuardBits.
using BigReal =
    boost::multiprecision::number<boost::multiprecision::backends::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

inline constexpr unsigned kGuardBits = 32;

// Zero at an explicit mpfr precision; the seed for a computation.
inline BigReal real_with_bits(unsigned bits) {
    BigReal x(0);
    mpfr_set_prec(x.backend().data(), static_cast<mpfr_prec_t>(std::max(bits, 16u)));
    mpfr_set_ui(x.backend().data(), 0, MPFR_RNDN);
    return x;
}

inline BigReal pi_at(unsigned bits) {
    BigReal r = real_with_bits(bits);
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

inline BigReal catalan_at(unsigned bits) {
    BigReal r = real_with_bits(bits);
    mpfr_const_catalan(r.backend().data(), MPFR_RNDN);
    return r;
}

inline BigReal to_bigreal(const Rational& q, unsigned bits) {
    BigReal r = real_with_bits(bits);
    mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
    return r;
}

inline BigReal pow2(long exponent) {
    BigReal r = real_with_bits(64);
    mpfr_set_ui_2exp(r.backend().data(), 1, exponent, MPFR_RNDN);
    return r;
}

struct BigComplex {
    BigReal re;
    BigReal im;

    BigComplex() : re(0), im(0) {}
    BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}

    BigComplex operator+(const BigComplex& o) const { return {re + o.re, im + o.im}; }
    BigComplex operator-(const BigComplex& o) const { return {re - o.re, im - o.im}; }
    BigComplex operator*(const BigComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    BigComplex& operator+=(const BigComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    BigReal abs() const { return boost::multiprecision::sqrt(re * re + im * im); }
};

// i^k * x for real x, as a complex number. The zero limb is created at
// x's precision so later arithmetic cannot collapse to a narrow operand.
inline BigComplex i_power_times(unsigned k, const BigReal& x) {
    BigReal zero =
        real_with_bits(static_cast<unsigned>(mpfr_get_prec(x.backend().data())));
    switch (k % 4) {
        case 0: return {x, zero};
        case 1: return {zero, x};
        case 2: return {-x, zero};
        default: return {zero, -x};
    }
}

// log2 of |x|; used to annotate residuals as "below 2^b". Exact zeros
// report a large negative sentinel.
inline double log2_abs(const BigReal& x) {
    if (x == 0) return -1e9;
    long exp2 = 0;
    double m = mpfr_get_d_2exp(&exp2, x.backend().data(), MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(exp2);
}

inline std::string decimal_string(const BigReal& x, unsigned digits) {
    return x.str(digits);
}

inline unsigned guaranteed_decimal_digits(unsigned precision_bits) {
    unsigned trusted = precision_bits > kGuardBits ? precision_bits - kGuardBits : 0;
    return static_cast<unsigned>(trusted * 0.30103);
}

}  // namespace cotspaces
