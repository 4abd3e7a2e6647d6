#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "cyclotomic.hpp"
#include "exact.hpp"

namespace cotspaces {

// D_k with D_1(c) = c and D_k = -(1+c^2) * dD_{k-1}/dc, so that
// cot^{(k-1)}(z) = D_k(cot z). Only powers c^j with j == k (mod 2) occur.
struct DerivPoly {
    unsigned k;
    std::vector<Integer> coeffs;  // coeffs[j] multiplies c^j; degree k
};

inline DerivPoly derivative_poly(unsigned k) {
    if (k == 0) throw std::invalid_argument("derivative_poly: k must be >= 1");
    static std::vector<DerivPoly> table{DerivPoly{0, {}}, DerivPoly{1, {Integer(0), Integer(1)}}};
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    while (table.size() <= k) {
        const auto& prev = table.back().coeffs;
        std::vector<Integer> deriv(prev.size() - 1);
        for (std::size_t j = 1; j < prev.size(); ++j) deriv[j - 1] = prev[j] * Integer(j);
        std::vector<Integer> next(deriv.size() + 2);
        for (std::size_t j = 0; j < deriv.size(); ++j) {
            next[j] -= deriv[j];
            next[j + 2] -= deriv[j];
        }
        table.push_back(DerivPoly{static_cast<unsigned>(table.size()), std::move(next)});
    }
    return table[k];
}

// The normalized cotangent value C_k(a, q) = i^k cot^{(k-1)}(pi a / q),
// an exact element of Q(zeta_q). sigma_{-1} acts on it by (-1)^k and
// (zeta_q - zeta_q^{-1})^k C_k(a, q) is totally real.
struct CotanValue {
    unsigned k;
    std::uint64_t a;
    std::uint64_t q;
    CycloElem value;
};

namespace detail {

inline std::uint64_t normalize_cot_args(unsigned k, std::int64_t a_in, std::uint64_t q) {
    if (k == 0) throw std::invalid_argument("cotangent order k must be >= 1");
    if (q <= 2) throw std::invalid_argument("cotangent values need q > 2");
    std::int64_t m = a_in % static_cast<std::int64_t>(q);
    if (m < 0) m += static_cast<std::int64_t>(q);
    if (m == 0 || gcd_u64(static_cast<std::uint64_t>(m), q) != 1)
        throw std::invalid_argument("cotangent argument a must be coprime to q");
    return static_cast<std::uint64_t>(m);
}

inline void check_cotan_invariants(const CotanValue& v) {
    CycloElem conj = v.value.galois(-1);
    CycloElem expect = (v.k % 2 == 0) ? v.value : -v.value;
    if (conj != expect) throw std::logic_error("C_k(a,q): sigma_{-1} eigenvalue violated");
    if (!(zeta_minus_inverse(v.q).pow(v.k) * v.value).is_real())
        throw std::logic_error("C_k(a,q): scaled value left Q(zeta_q)^+");
}

}  // namespace detail

// Route 1: substitute -i cot(pi a/q) = (zeta^a + 1)/(zeta^a - 1) into D_k.
// D_k has parity k, so every i-power collapses to a rational sign and the
// value lands in Q(zeta_q) with no i adjoined:
//   C_k(a,q) = (-1)^k sum_j d_j (-1)^{(j-k)/2} u^j,  u = (zeta^a+1)/(zeta^a-1).
inline CotanValue cotan_norm(unsigned k, std::int64_t a_in, std::uint64_t q) {
    std::uint64_t a = detail::normalize_cot_args(k, a_in, q);
    CycloElem za = CycloElem::zeta_power(q, static_cast<std::int64_t>(a));
    CycloElem one = CycloElem::from_rational(1, q);
    CycloElem u = (za + one) * (za - one).inverse();

    DerivPoly d = derivative_poly(k);
    CycloElem acc = CycloElem::zero(q);
    CycloElem upow = one;
    for (unsigned j = 0; j <= k; ++j) {
        if (d.coeffs[j] != 0) {
            long half = (static_cast<long>(j) - static_cast<long>(k)) / 2;
            Rational sign = (half % 2 == 0) ? Rational(1) : Rational(-1);
            acc = acc + upow * (sign * Rational(d.coeffs[j]));
        }
        if (j < k) upow = upow * u;
    }
    if (k % 2 != 0) acc = -acc;

    CotanValue v{k, a, q, acc};
    detail::check_cotan_invariants(v);
    return v;
}

// Route 2: the operator identity cot^{(h-1)}(z) = i^h (2X d/dX)^{h-1}
// ((X+1)/(X-1)) at X = e^{2iz}. R_k is kept as an integer-coefficient
// numerator over (X-1)^k, so evaluation inverts zeta^a - 1 once.
inline CotanValue cotan_via_operator(unsigned k, std::int64_t a_in, std::uint64_t q) {
    std::uint64_t a = detail::normalize_cot_args(k, a_in, q);

    std::vector<Integer> num{Integer(1), Integer(1)};  // X + 1
    unsigned den_pow = 1;
    for (unsigned step = 1; step < k; ++step) {
        // d/dX [N/(X-1)^m] = (N'(X-1) - mN) / (X-1)^{m+1}, then times 2X.
        std::vector<Integer> dn(num.size() > 1 ? num.size() - 1 : 0);
        for (std::size_t j = 1; j < num.size(); ++j) dn[j - 1] = num[j] * Integer(j);
        std::vector<Integer> t(num.size() + 1);
        for (std::size_t j = 0; j < dn.size(); ++j) {
            t[j + 1] += dn[j];
            t[j] -= dn[j];
        }
        for (std::size_t j = 0; j < num.size(); ++j) t[j] -= Integer(den_pow) * num[j];
        std::vector<Integer> next(t.size() + 1);
        for (std::size_t j = 0; j < t.size(); ++j) next[j + 1] = 2 * t[j];
        num = std::move(next);
        ++den_pow;
    }

    CycloElem za = CycloElem::zeta_power(q, static_cast<std::int64_t>(a));
    CycloElem acc = CycloElem::zero(q);
    CycloElem zpow = CycloElem::from_rational(1, q);
    for (std::size_t j = 0; j < num.size(); ++j) {
        if (num[j] != 0) acc = acc + zpow * Rational(num[j]);
        if (j + 1 < num.size()) zpow = zpow * za;
    }
    CycloElem inv = (za - CycloElem::from_rational(1, q)).inverse();
    CycloElem value = acc * inv.pow(den_pow);
    if (k % 2 != 0) value = -value;

    CotanValue v{k, a, q, value};
    detail::check_cotan_invariants(v);
    return v;
}

// T_q = { 1 <= a < q/2 : gcd(a, q) = 1 }, the standard half-system.
inline std::vector<std::uint64_t> t_set(std::uint64_t q) {
    std::vector<std::uint64_t> t;
    for (std::uint64_t a = 1; 2 * a < q; ++a) {
        if (gcd_u64(a, q) == 1) t.push_back(a);
    }
    return t;
}

// Closed form for sum_{(a,q)=1} C_k(a,q) with k even:
//   -2 (k-1)! q^k prod_{p|q} (1 - p^{-k}) zeta_norm(k).
inline Rational cotan_trace_closed_form(unsigned k, std::uint64_t q) {
    Rational euler(1);
    for (const auto& [p, e] : factorize(q)) {
        Integer pk = pow_int(Integer(p), k);
        euler *= Rational(pk - 1, pk);
    }
    return Rational(-2) * Rational(factorial(k - 1)) * Rational(pow_int(Integer(q), k)) * euler *
           zeta_norm(k);
}

// Full-unit-group sum of C_k(a,q) for even k, computed as the trace of a
// single value (the conjugates permute the C_k(a,q)), and checked against
// the closed form before returning.
inline Rational cotan_trace_sum(unsigned k, std::uint64_t q) {
    if (k % 2 != 0)
        throw std::domain_error("cotan_trace_sum: odd k sums to zero; use even k");
    if (q <= 2) throw std::invalid_argument("cotan_trace_sum: q must be > 2");
    Rational tr = cotan_norm(k, 1, q).value.trace_to_Q();
    if (tr != cotan_trace_closed_form(k, q))
        throw std::logic_error("cotan_trace_sum: trace disagrees with the closed form");
    return tr;
}

}  // namespace cotspaces
