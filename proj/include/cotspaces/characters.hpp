#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cotangent.hpp"
#include "cyclotomic.hpp"
#include "exact.hpp"

namespace cotspaces {

// (Z/qZ)^x as a direct product of cyclic groups: one generator per odd
// prime power, {-1, 5} for 2^e with e >= 3. Discrete logs of every unit
// are tabulated at construction.
struct UnitGroup {
    struct Generator {
        std::uint64_t residue;
        std::uint64_t order;
    };

    std::uint64_t q = 1;
    std::uint64_t phi = 1;
    std::uint64_t exponent = 1;  // lcm of generator orders
    std::vector<Generator> generators;
    std::vector<std::uint64_t> units;                // increasing
    std::vector<std::vector<std::uint64_t>> logs;    // logs[a]; empty for non-units
    std::vector<std::uint64_t> inverse_residue;      // a^{-1} mod q for units, else 0

    bool is_unit(std::uint64_t a) const { return q == 1 || gcd_u64(a % q, q) == 1; }
};

namespace detail {

inline std::uint64_t crt_combine(std::uint64_t r1, std::uint64_t m1, std::uint64_t r2,
                                 std::uint64_t m2) {
    // Coprime moduli; result x == r1 (mod m1), x == r2 (mod m2).
    std::uint64_t x = r1 % m1;
    std::uint64_t step = m1;
    while (x % m2 != r2 % m2) x += step;
    return x % (m1 * m2);
}

inline const UnitGroup& unit_group_uncached(std::uint64_t q, UnitGroup& g) {
    g.q = q;
    g.phi = euler_phi(q);
    g.exponent = 1;
    if (q > 1) {
        for (const auto& [p, e] : factorize(q)) {
            std::uint64_t pe = pow_u64(p, e);
            std::uint64_t rest = q / pe;
            auto lift = [&](std::uint64_t r) {
                return rest == 1 ? r % q : crt_combine(r, pe, 1, rest);
            };
            if (p == 2) {
                if (e == 1) continue;  // trivial component
                if (e == 2) {
                    g.generators.push_back({lift(3), 2});
                } else {
                    g.generators.push_back({lift(pe - 1), 2});
                    g.generators.push_back({lift(5), pe / 4});
                }
            } else {
                g.generators.push_back({lift(primitive_root(pe)), euler_phi(pe)});
            }
        }
        for (const auto& gen : g.generators) g.exponent = lcm_u64(g.exponent, gen.order);
    }

    g.logs.assign(q == 1 ? 1 : q, {});
    g.inverse_residue.assign(q == 1 ? 1 : q, 0);
    std::vector<std::uint64_t> tuple(g.generators.size(), 0);
    while (true) {
        std::uint64_t residue = 1 % (q == 1 ? 1 : q);
        for (std::size_t i = 0; i < tuple.size(); ++i)
            residue = q == 1 ? 0 : mulmod_u64(residue, powmod_u64(g.generators[i].residue, tuple[i], q), q);
        g.logs[residue] = tuple;
        g.units.push_back(residue);
        std::size_t i = tuple.size();
        while (i > 0 && ++tuple[i - 1] == g.generators[i - 1].order) {
            tuple[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    std::sort(g.units.begin(), g.units.end());
    if (g.units.size() != g.phi) throw std::logic_error("unit_group: generator orders inconsistent");
    for (std::uint64_t a : g.units) {
        for (std::uint64_t b : g.units) {
            if (q <= 1 || mulmod_u64(a, b, q) == 1 % q) {
                g.inverse_residue[a] = b;
                break;
            }
        }
    }
    return g;
}

}  // namespace detail

inline const UnitGroup& unit_group(std::uint64_t q) {
    if (q == 0) throw std::invalid_argument("unit_group: q must be >= 1");
    static std::map<std::uint64_t, UnitGroup> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    UnitGroup g;
    detail::unit_group_uncached(q, g);
    return cache.emplace(q, std::move(g)).first->second;
}

// A Dirichlet character mod q, encoded by its exponents on the unit-group
// generators: chi(g_i) = zeta_{order_i}^{exponents[i]}. Values are exact
// roots of unity; non-units map to 0.
class DirichletChar {
  public:
    DirichletChar(std::uint64_t q, std::vector<std::uint64_t> exponents)
        : q_(q), exps_(std::move(exponents)) {
        const UnitGroup& g = unit_group(q_);
        if (exps_.size() != g.generators.size())
            throw std::invalid_argument("DirichletChar: one exponent per generator required");
        order_ = 1;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            std::uint64_t oi = g.generators[i].order;
            if (exps_[i] >= oi) throw std::invalid_argument("DirichletChar: exponent out of range");
            order_ = lcm_u64(order_, oi / gcd_u64(oi, exps_[i]));
        }
        if (q_ <= 2) {
            parity_ = 1;
        } else {
            // chi(-1) is a square root of 1, so its exponent t on zeta_L
            // is 0 or L/2.
            std::uint64_t t = *value_exponent(static_cast<std::int64_t>(q_) - 1);
            if ((2 * t) % g.exponent != 0)
                throw std::logic_error("DirichletChar: chi(-1) is not a sign");
            parity_ = (t == 0) ? 1 : -1;
        }
    }

    std::uint64_t modulus() const { return q_; }
    std::uint64_t order() const { return order_; }
    const std::vector<std::uint64_t>& exponents() const { return exps_; }
    bool is_principal() const { return order_ == 1; }
    // chi(-1): +1 for even characters, -1 for odd ones.
    int parity() const { return parity_; }

    // t with chi(a) = zeta_L^t (L the group exponent), or nothing when
    // gcd(a, q) > 1.
    std::optional<std::uint64_t> value_exponent(std::int64_t a) const {
        const UnitGroup& g = unit_group(q_);
        std::int64_t m = q_ == 1 ? 0 : a % static_cast<std::int64_t>(q_);
        if (m < 0) m += static_cast<std::int64_t>(q_);
        std::uint64_t am = static_cast<std::uint64_t>(m);
        if (!g.is_unit(am)) return std::nullopt;
        const auto& log = g.logs[am];
        std::uint64_t t = 0;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            std::uint64_t oi = g.generators[i].order;
            t = (t + exps_[i] * log[i] % oi * (g.exponent / oi)) % g.exponent;
        }
        return t;
    }

    // chi(a) as an element of Q(zeta_order).
    CycloElem eval(std::int64_t a) const {
        auto t = value_exponent(a);
        if (!t) return CycloElem::zero(order_);
        std::uint64_t L = unit_group(q_).exponent;
        if ((*t * order_) % L != 0) throw std::logic_error("char value outside Q(zeta_order)");
        return CycloElem::zeta_power(order_, static_cast<std::int64_t>(*t * order_ / L));
    }

    bool operator==(const DirichletChar& o) const { return q_ == o.q_ && exps_ == o.exps_; }

  private:
    std::uint64_t q_;
    std::vector<std::uint64_t> exps_;
    std::uint64_t order_;
    int parity_;
};

// All phi(q) characters mod q in lexicographic exponent order.
inline std::vector<DirichletChar> all_characters(std::uint64_t q) {
    const UnitGroup& g = unit_group(q);
    std::vector<DirichletChar> chars;
    chars.reserve(g.phi);
    std::vector<std::uint64_t> tuple(g.generators.size(), 0);
    while (true) {
        chars.emplace_back(q, tuple);
        std::size_t i = tuple.size();
        while (i > 0 && ++tuple[i - 1] == g.generators[i - 1].order) {
            tuple[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    if (chars.size() != g.phi) throw std::logic_error("all_characters: enumeration incomplete");
    return chars;
}

namespace detail {

// Sum of zeta_L^{t} over a multiset of exponents, as an element of
// Q(zeta_L); the workhorse for orthogonality sums.
inline CycloElem root_of_unity_sum(std::uint64_t L, const std::vector<std::int64_t>& counts) {
    CycloElem acc = CycloElem::zero(L);
    for (std::uint64_t t = 0; t < counts.size(); ++t) {
        if (counts[t] != 0)
            acc = acc + CycloElem::zeta_power(L, static_cast<std::int64_t>(t)) *
                            Rational(counts[t]);
    }
    return acc;
}

}  // namespace detail

// (1/phi) sum_a chi(a) psi(a^{-1}), exactly; 1 when chi == psi, else 0.
inline bool orthogonality_holds(const DirichletChar& chi, const DirichletChar& psi) {
    std::uint64_t q = chi.modulus();
    if (q != psi.modulus()) throw std::invalid_argument("orthogonality: moduli differ");
    const UnitGroup& g = unit_group(q);
    std::vector<std::int64_t> counts(g.exponent, 0);
    for (std::uint64_t a : g.units) {
        std::uint64_t t1 = *chi.value_exponent(static_cast<std::int64_t>(a));
        std::uint64_t t2 = *psi.value_exponent(static_cast<std::int64_t>(g.inverse_residue[a]));
        counts[(t1 + t2) % g.exponent] += 1;
    }
    CycloElem sum = detail::root_of_unity_sum(g.exponent, counts);
    CycloElem expect = (chi == psi) ? CycloElem::from_rational(Rational(g.phi), g.exponent)
                                    : CycloElem::zero(g.exponent);
    return sum == expect;
}

// The character table M = (chi_b(a))_{a,b} over Q(zeta_exponent), rows
// indexed by units in increasing order, columns by characters in
// canonical order. Construction certifies exactly that
// (1/phi)(chi_b(a^{-1}))_{b,a} inverts it on both sides.
struct CharMatrix {
    std::uint64_t q;
    std::uint64_t field;  // exponent of the unit group
    std::vector<std::uint64_t> units;
    std::vector<DirichletChar> chars;
    std::vector<std::vector<CycloElem>> entries;  // entries[a_idx][b_idx]
    bool inverse_certified = false;
};

inline CharMatrix char_matrix(std::uint64_t q) {
    if (q < 3) throw std::invalid_argument("char_matrix: q must be >= 3");
    const UnitGroup& g = unit_group(q);
    CharMatrix m;
    m.q = q;
    m.field = g.exponent;
    m.units = g.units;
    m.chars = all_characters(q);
    m.entries.resize(g.phi);
    for (std::size_t i = 0; i < g.phi; ++i) {
        m.entries[i].reserve(g.phi);
        for (std::size_t b = 0; b < g.phi; ++b) {
            std::uint64_t t = *m.chars[b].value_exponent(static_cast<std::int64_t>(m.units[i]));
            m.entries[i].push_back(CycloElem::zeta_power(g.exponent, static_cast<std::int64_t>(t)));
        }
    }

    // M . Minv = I over units, Minv . M = I over characters.
    for (std::size_t i = 0; i < g.phi; ++i) {
        for (std::size_t j = 0; j < g.phi; ++j) {
            std::vector<std::int64_t> counts(g.exponent, 0);
            for (std::size_t b = 0; b < g.phi; ++b) {
                std::uint64_t t1 = *m.chars[b].value_exponent(static_cast<std::int64_t>(m.units[i]));
                std::uint64_t t2 = *m.chars[b].value_exponent(
                    static_cast<std::int64_t>(g.inverse_residue[m.units[j]]));
                counts[(t1 + t2) % g.exponent] += 1;
            }
            CycloElem sum = detail::root_of_unity_sum(g.exponent, counts);
            CycloElem expect = (i == j) ? CycloElem::from_rational(Rational(g.phi), g.exponent)
                                        : CycloElem::zero(g.exponent);
            if (sum != expect) throw std::logic_error("char_matrix: row inverse check failed");
        }
    }
    for (std::size_t b = 0; b < g.phi; ++b) {
        for (std::size_t c = 0; c < g.phi; ++c) {
            if (!orthogonality_holds(m.chars[b], m.chars[c]))
                throw std::logic_error("char_matrix: orthogonality check failed");
        }
    }
    m.inverse_certified = true;
    return m;
}

// Lambda(k, chi) = sum_{a in T_q} chi(a) C_k(a, q), the exact character
// coordinate of the L-value, inside Q(zeta_lcm(q, order)).
inline CycloElem l_coordinates(unsigned k, const DirichletChar& chi) {
    std::uint64_t q = chi.modulus();
    if (q <= 2) throw std::invalid_argument("l_coordinates: q must be > 2");
    if (k == 0) throw std::invalid_argument("l_coordinates: k must be >= 1");
    std::uint64_t N = lcm_u64(q, chi.order());
    CycloElem acc = CycloElem::zero(N);
    for (std::uint64_t a : t_set(q)) {
        CycloElem term = chi.eval(static_cast<std::int64_t>(a)).embed(N) *
                         cotan_norm(k, static_cast<std::int64_t>(a), q).value.embed(N);
        acc = acc + term;
    }
    return acc;
}

// Full unit-group sum; equals 2 Lambda when chi(-1) = (-1)^k and vanishes
// exactly otherwise.
inline CycloElem char_full_unit_sum(unsigned k, const DirichletChar& chi) {
    std::uint64_t q = chi.modulus();
    if (q <= 2) throw std::invalid_argument("char_full_unit_sum: q must be > 2");
    std::uint64_t N = lcm_u64(q, chi.order());
    CycloElem acc = CycloElem::zero(N);
    for (std::uint64_t a : unit_group(q).units) {
        CycloElem term = chi.eval(static_cast<std::int64_t>(a)).embed(N) *
                         cotan_norm(k, static_cast<std::int64_t>(a), q).value.embed(N);
        acc = acc + term;
    }
    return acc;
}

}  // namespace cotspaces
