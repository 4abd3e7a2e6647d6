#include <catch2/catch_amalgamated.hpp>

#include <cotspaces/numerics.hpp>

using namespace cotspaces;
using boost::multiprecision::abs;
using boost::multiprecision::pow;

TEST_CASE("hurwitz zeta special values") {
    BigReal pi = pi_at(300);
    BigReal tol = pow2(-250);

    CHECK(abs(hurwitz_zeta(2, 1, 256) - pi * pi / 6) < tol);
    CHECK(abs(hurwitz_zeta(2, Rational(1, 2), 256) - pi * pi / 2) < tol);

    BigReal diff = hurwitz_zeta(3, Rational(1, 4), 256) - hurwitz_zeta(3, Rational(3, 4), 256);
    CHECK(abs(diff - 2 * pi * pi * pi) < tol);

    CHECK_THROWS_AS(hurwitz_zeta(1, Rational(1, 2), 128), std::domain_error);
    CHECK_THROWS_AS(hurwitz_zeta(2, Rational(3, 2), 128), std::domain_error);
    CHECK_THROWS_AS(hurwitz_zeta(2, Rational(0), 128), std::domain_error);
}

TEST_CASE("hurwitz zeta at 1 matches the exact rational avatar") {
    for (unsigned prec : {128u, 256u}) {
        BigReal pi = pi_at(prec + 64);
        BigReal tol = pow2(-static_cast<long>(prec - kGuardBits));
        for (unsigned k = 2; k <= 10; k += 2) {
            // zeta(k) = (-1)^{k/2} pi^k r_k.
            BigReal expect = pow(pi, k) * to_bigreal(zeta_norm(k), prec + 64);
            if ((k / 2) % 2 != 0) expect = -expect;
            CHECK(abs(hurwitz_zeta(k, 1, prec) - expect) < tol);
        }
    }
}

TEST_CASE("doubling precision at least doubles the guaranteed digits") {
    BigReal pi = pi_at(600);
    auto digits_ok = [&](unsigned prec) {
        BigReal err = abs(hurwitz_zeta(2, Rational(1, 2), prec) - pi * pi / 2);
        return err < pow2(-static_cast<long>(prec - kGuardBits));
    };
    CHECK(digits_ok(128));
    CHECK(digits_ok(256));
    CHECK(digits_ok(512));

    BigReal r128 = bridge_residual_reflection(3, 1, 4, 128);
    BigReal r256 = bridge_residual_reflection(3, 1, 4, 256);
    CHECK(r128 < pow2(-96));
    CHECK(r256 < pow2(-192));
}

TEST_CASE("dirichlet L special values") {
    auto c4 = all_characters(4);
    const DirichletChar& chi4 = c4[1];
    REQUIRE(chi4.parity() == -1);

    // L(2, chi_4) is Catalan's constant; mpfr computes it independently.
    BigComplex catalan_series = dirichlet_L(2, chi4, 256);
    CHECK(abs(catalan_series.re - catalan_at(300)) < pow2(-199));  // < 1e-60
    CHECK(abs(catalan_series.im) < pow2(-199));

    BigReal pi = pi_at(300);
    BigComplex l3 = dirichlet_L(3, chi4, 256);
    CHECK(abs(l3.re - pi * pi * pi / 32) < pow2(-240));

    BigComplex l2_triv = dirichlet_L(2, all_characters(3)[0], 256);
    BigReal expect = pi * pi / 6 * 8 / 9;
    CHECK(abs(l2_triv.re - expect) < pow2(-240));
}

TEST_CASE("dirichlet L against a direct partial series sum") {
    auto c5 = all_characters(5);
    const DirichletChar* quad = nullptr;
    for (const auto& c : c5)
        if (c.order() == 2) quad = &c;
    REQUIRE(quad != nullptr);

    double partial = 0;
    for (std::uint64_t n = 1; n <= 2'000'000; ++n) {
        auto t = quad->value_exponent(static_cast<std::int64_t>(n));
        if (!t) continue;
        double sign = (*t == 0) ? 1.0 : -1.0;
        partial += sign / (static_cast<double>(n) * static_cast<double>(n));
    }
    BigComplex exact = dirichlet_L(2, *quad, 128);
    CHECK(std::fabs(static_cast<double>(exact.re) - partial) < 1e-9);
    CHECK(abs(exact.im) < pow2(-100));
}

TEST_CASE("numeric cotangent derivatives") {
    BigReal tol = pow2(-200);
    CHECK(abs(cot_derivative_numeric(2, 1, 4, 256) + 2) < tol);
    CHECK(abs(cot_derivative_numeric(1, 1, 6, 256) -
              boost::multiprecision::sqrt(real_with_bits(288) + 3)) < tol);
    CHECK(abs(cot_derivative_numeric(3, 1, 4, 256) - 4) < tol);

    // cot(pi/4) = 1, so the finite-sum formula sends Lambda(1, chi_4) to
    // pi/4, the Leibniz value.
    BigReal leibniz = pi_at(288) * cot_derivative_numeric(1, 1, 4, 256) / 4;
    CHECK(abs(leibniz - pi_at(288) / 4) < tol);
}

TEST_CASE("derivative polynomials against central finite differences") {
    // Differentiate cot numerically, independently of the D_k recurrence.
    const unsigned work = 400;
    BigReal h = real_with_bits(work) + pow2(-45);
    auto cot_at = [&](const BigReal& x) {
        BigReal sn = real_with_bits(work);
        BigReal cs = real_with_bits(work);
        mpfr_sin_cos(sn.backend().data(), cs.backend().data(), x.backend().data(), MPFR_RNDN);
        return cs / sn;
    };
    for (auto [a, q] : std::vector<std::pair<std::int64_t, std::uint64_t>>{{1, 5}, {2, 7}, {1, 4}}) {
        BigReal x = pi_at(work) * static_cast<unsigned long>(a) / static_cast<unsigned long>(q);
        BigReal f1 = (cot_at(x + h) - cot_at(x - h)) / (2 * h);
        BigReal f2 = (cot_at(x + h) - 2 * cot_at(x) + cot_at(x - h)) / (h * h);
        BigReal f3 = (cot_at(x + 2 * h) - 2 * cot_at(x + h) + 2 * cot_at(x - h) -
                      cot_at(x - 2 * h)) /
                     (2 * h * h * h);
        CHECK(abs(f1 - cot_derivative_numeric(2, a, q, 256)) < pow2(-80));
        CHECK(abs(f2 - cot_derivative_numeric(3, a, q, 256)) < pow2(-75));
        CHECK(abs(f3 - cot_derivative_numeric(4, a, q, 256)) < pow2(-70));
    }
}

TEST_CASE("bridge residual examples") {
    CHECK(bridge_residual_reflection(3, 1, 4, 256) < pow2(-200));
    CHECK(bridge_residual_representation(2, 1, 3, 256) < pow2(-200));

    auto c5 = all_characters(5);
    for (const auto& chi : c5) {
        if (chi.parity() == 1) CHECK(bridge_residual_lvalue(2, chi, 256) < pow2(-200));
    }

    auto c4 = all_characters(4);
    CHECK_THROWS_AS(bridge_residual_lvalue(2, c4[1], 256), std::domain_error);

    CHECK(bridge_residual("reflection", 3, 1, 4, 256) < pow2(-200));
    CHECK(bridge_residual("rep", 1, 1, 4, 256) < pow2(-200));
    CHECK_THROWS_AS(bridge_residual("nope", 2, 1, 4, 256), std::invalid_argument);
}
