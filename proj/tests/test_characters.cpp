#include <catch2/catch_amalgamated.hpp>

#include <cotspaces/characters.hpp>

using namespace cotspaces;

TEST_CASE("unit group structure") {
    const UnitGroup& g8 = unit_group(8);
    REQUIRE(g8.generators.size() == 2);
    CHECK(g8.generators[0].residue == 7);
    CHECK(g8.generators[0].order == 2);
    CHECK(g8.generators[1].residue == 5);
    CHECK(g8.generators[1].order == 2);

    const UnitGroup& g5 = unit_group(5);
    REQUIRE(g5.generators.size() == 1);
    CHECK(g5.generators[0].residue == 2);
    CHECK(g5.generators[0].order == 4);

    const UnitGroup& g1 = unit_group(1);
    CHECK(g1.phi == 1);
    CHECK(g1.generators.empty());

    for (std::uint64_t q = 1; q <= 60; ++q) {
        const UnitGroup& g = unit_group(q);
        std::uint64_t prod = 1;
        for (const auto& gen : g.generators) prod *= gen.order;
        REQUIRE(prod == g.phi);
        REQUIRE(g.units.size() == g.phi);
        for (std::uint64_t a : g.units) {
            // Discrete log round trip.
            std::uint64_t v = 1 % (q == 1 ? 1 : q);
            for (std::size_t i = 0; i < g.generators.size(); ++i)
                v = mulmod_u64(v, powmod_u64(g.generators[i].residue, g.logs[a][i], q), q);
            REQUIRE(v == a);
        }
    }
}

TEST_CASE("character enumeration and parity census") {
    auto c4 = all_characters(4);
    REQUIRE(c4.size() == 2);
    CHECK(c4[0].is_principal());
    CHECK(c4[0].parity() == 1);
    CHECK(c4[1].parity() == -1);
    CHECK(c4[1].eval(3) == CycloElem::from_rational(-1, 2));

    auto c5 = all_characters(5);
    REQUIRE(c5.size() == 4);
    CHECK(std::count_if(c5.begin(), c5.end(), [](auto& c) { return c.parity() == -1; }) == 2);

    auto c3 = all_characters(3);
    REQUIRE(c3.size() == 2);
    CHECK(c3[0].is_principal());
    CHECK(c3[0].parity() == 1);
    CHECK(c3[1].parity() == -1);

    for (std::uint64_t q = 3; q <= 40; ++q) {
        auto chars = all_characters(q);
        REQUIRE(chars.size() == euler_phi(q));
        long odd = std::count_if(chars.begin(), chars.end(),
                                 [](auto& c) { return c.parity() == -1; });
        REQUIRE(odd == static_cast<long>(euler_phi(q) / 2));
    }
}

TEST_CASE("character evaluation") {
    // Order-4 character mod 5 with chi(2) = zeta_4.
    auto c5 = all_characters(5);
    const DirichletChar* chi = nullptr;
    for (const auto& c : c5) {
        if (c.order() == 4 && c.eval(2) == CycloElem::zeta_power(4, 1)) chi = &c;
    }
    REQUIRE(chi != nullptr);
    CHECK(chi->eval(4) == CycloElem::from_rational(-1, 4));

    CHECK(all_characters(6)[1].eval(3).is_zero());
    CHECK(all_characters(10)[1].eval(5).is_zero());

    // Complete multiplicativity on units.
    for (std::uint64_t q : {5, 8, 12, 15}) {
        for (const auto& c : all_characters(q)) {
            std::uint64_t L = lcm_u64(c.order(), 1);
            for (std::uint64_t a : unit_group(q).units) {
                for (std::uint64_t b : unit_group(q).units) {
                    CycloElem lhs = c.eval(static_cast<std::int64_t>(mulmod_u64(a, b, q)));
                    CycloElem rhs = c.eval(a) * c.eval(b);
                    REQUIRE(lhs.embed(L) == rhs.embed(L));
                }
            }
            REQUIRE(c.eval(1) == CycloElem::from_rational(1, c.order()));
        }
    }
}

TEST_CASE("orthogonality for all pairs up to q = 30") {
    for (std::uint64_t q = 3; q <= 30; ++q) {
        auto chars = all_characters(q);
        for (const auto& a : chars)
            for (const auto& b : chars) REQUIRE(orthogonality_holds(a, b));
    }
}

TEST_CASE("character matrix with certified inverse") {
    CharMatrix m3 = char_matrix(3);
    REQUIRE(m3.inverse_certified);
    REQUIRE(m3.units == std::vector<std::uint64_t>{1, 2});
    CHECK(m3.entries[0][0] == CycloElem::from_rational(1, 2));
    CHECK(m3.entries[0][1] == CycloElem::from_rational(1, 2));
    CHECK(m3.entries[1][0] == CycloElem::from_rational(1, 2));
    CHECK(m3.entries[1][1] == CycloElem::from_rational(-1, 2));

    CharMatrix m4 = char_matrix(4);
    REQUIRE(m4.inverse_certified);
    CHECK(m4.entries[1][1] == CycloElem::from_rational(-1, m4.field));

    CHECK(char_matrix(5).inverse_certified);
    CHECK_THROWS_AS(char_matrix(2), std::invalid_argument);
}

TEST_CASE("l_coordinates examples") {
    // Odd character mod 4 at k = 1: Lambda = zeta_4.
    auto c4 = all_characters(4);
    CHECK(l_coordinates(1, c4[1]) == CycloElem::zeta_power(4, 1).embed(4));

    // Parity mismatch: k = 2 against the odd character mod 4.
    CHECK(char_full_unit_sum(2, c4[1]).is_zero());

    // Quadratic (even) character mod 5 at k = 2: C_2(1,5) - C_2(2,5).
    auto c5 = all_characters(5);
    const DirichletChar* quad = nullptr;
    for (const auto& c : c5)
        if (c.order() == 2) quad = &c;
    REQUIRE(quad != nullptr);
    CHECK(quad->parity() == 1);
    CycloElem expect = cotan_norm(2, 1, 5).value - cotan_norm(2, 2, 5).value;
    CHECK(l_coordinates(2, *quad) == expect.embed(10));
}

TEST_CASE("full unit sum versus Lambda") {
    for (std::uint64_t q : {4, 5, 7, 8, 12}) {
        for (unsigned k = 1; k <= 4; ++k) {
            for (const auto& chi : all_characters(q)) {
                CycloElem full = char_full_unit_sum(k, chi);
                bool matched = (chi.parity() == (k % 2 == 0 ? 1 : -1));
                if (matched) {
                    REQUIRE(full == l_coordinates(k, chi) * Rational(2));
                } else {
                    REQUIRE(full.is_zero());
                }
            }
        }
    }
}

TEST_CASE("inverse transform recovers the cotangent values") {
    for (std::uint64_t q : {5, 7, 8, 12}) {
        const UnitGroup& g = unit_group(q);
        auto chars = all_characters(q);
        for (unsigned k = 2; k <= 3; ++k) {
            std::vector<CycloElem> sums;
            std::uint64_t N = q;
            for (const auto& chi : chars) N = lcm_u64(N, chi.order());
            for (const auto& chi : chars) sums.push_back(char_full_unit_sum(k, chi).embed(N));
            for (std::uint64_t a : g.units) {
                CycloElem acc = CycloElem::zero(N);
                for (std::size_t b = 0; b < chars.size(); ++b) {
                    CycloElem w = chars[b]
                                      .eval(static_cast<std::int64_t>(g.inverse_residue[a]))
                                      .embed(N);
                    acc = acc + w * sums[b];
                }
                acc = acc * Rational(1, g.phi);
                REQUIRE(acc == cotan_norm(k, static_cast<std::int64_t>(a), q).value.embed(N));
            }
        }
    }
}
