#include <catch2/catch_amalgamated.hpp>

#include <cotspaces/exact.hpp>

#include <random>

using namespace cotspaces;

TEST_CASE("factorize canonical cases") {
    CHECK(factorize(12) == Factorization{{2, 2}, {3, 1}});
    CHECK(factorize(1).empty());
    CHECK(factorize(97) == Factorization{{97, 1}});
    CHECK(factorize(2ULL * 3 * 3 * 25013) == Factorization{{2, 1}, {3, 2}, {25013, 1}});
    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorization reconstructs its input") {
    for (std::uint64_t n = 1; n <= 5000; ++n) {
        std::uint64_t prod = 1;
        for (const auto& [p, e] : factorize(n)) {
            CHECK(is_prime(p));
            prod *= pow_u64(p, e);
        }
        REQUIRE(prod == n);
    }
}

TEST_CASE("euler_phi") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);

    // Brute count of coprime residues.
    auto brute = [](std::uint64_t n) {
        std::uint64_t c = 0;
        for (std::uint64_t a = 1; a <= n; ++a)
            if (gcd_u64(a, n) == 1) ++c;
        return c;
    };
    CHECK(euler_phi(60) == 16);
    CHECK(brute(60) == 16);
    for (std::uint64_t n : {7ULL, 29ULL, 96ULL, 360ULL, 420ULL}) CHECK(euler_phi(n) == brute(n));
}

TEST_CASE("euler_phi product formula over factorize, n <= 10^4") {
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        std::uint64_t expect = n;
        for (const auto& [p, e] : factorize(n)) expect = expect / p * (p - 1);
        REQUIRE(euler_phi(n) == expect);
    }
}

TEST_CASE("mobius") {
    CHECK(mobius(1) == 1);
    CHECK(mobius(4) == 0);
    CHECK(mobius(6) == 1);
    CHECK(mobius(30) == -1);
    CHECK(mobius(97) == -1);
}

TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli(0) == 1);
    CHECK(bernoulli(1) == Rational(-1, 2));
    CHECK(bernoulli(2) == Rational(1, 6));
    CHECK(bernoulli(4) == Rational(-1, 30));
    CHECK(bernoulli(12) == Rational(-691, 2730));

    for (unsigned n = 3; n <= 31; n += 2) CHECK(bernoulli(n) == 0);

    // Defining identity sum_{j<=n} C(n+1,j) B_j = 0, checked independently
    // of the memo table's own recurrence order.
    for (unsigned n = 1; n <= 30; ++n) {
        Rational acc(0);
        for (unsigned j = 0; j <= n; ++j) acc += Rational(binomial(n + 1, j)) * bernoulli(j);
        REQUIRE(acc == 0);
    }
}

TEST_CASE("zeta_norm") {
    CHECK(zeta_norm(2) == Rational(-1, 6));
    CHECK(zeta_norm(4) == Rational(1, 90));
    CHECK(zeta_norm(6) == Rational(-1, 945));
    CHECK(zeta_norm(8) == Rational(1, 9450));
    CHECK_THROWS_AS(zeta_norm(3), std::domain_error);
    CHECK_THROWS_AS(zeta_norm(1), std::domain_error);
    for (unsigned k = 2; k <= 16; k += 2) CHECK(zeta_norm(k) != 0);
}

TEST_CASE("primitive_root") {
    CHECK(primitive_root(7) == 3);
    CHECK(primitive_root(4) == 3);
    CHECK(primitive_root(9) == 2);
    CHECK(primitive_root(2) == 1);
    CHECK(primitive_root(25) == 2);
    CHECK_THROWS_AS(primitive_root(8), std::domain_error);
    CHECK_THROWS_AS(primitive_root(12), std::domain_error);

    // Order certificate: the returned g generates, nothing smaller does.
    for (std::uint64_t pe : {3ULL, 5ULL, 7ULL, 9ULL, 11ULL, 13ULL, 27ULL, 49ULL}) {
        std::uint64_t g = primitive_root(pe);
        std::uint64_t phi = euler_phi(pe);
        auto order_of = [&](std::uint64_t x) {
            std::uint64_t v = x % pe, ord = 1;
            while (v != 1) {
                v = mulmod_u64(v, x, pe);
                ++ord;
            }
            return ord;
        };
        CHECK(order_of(g) == phi);
        for (std::uint64_t h = 2; h < g; ++h) {
            if (gcd_u64(h, pe) != 1) continue;
            CHECK(order_of(h) < phi);
        }
    }
}

TEST_CASE("rational arithmetic is exact on pseudorandom canonical pairs") {
    std::mt19937_64 rng(20240711);
    std::uniform_int_distribution<std::int64_t> num(-1'000'000'000, 1'000'000'000);
    std::uniform_int_distribution<std::int64_t> den(1, 1'000'000'000);
    for (int i = 0; i < 1000; ++i) {
        Rational a(num(rng), den(rng));
        Rational b(num(rng), den(rng));
        REQUIRE((a + b) - b == a);
        REQUIRE(denominator(a) >= 1);
        Integer g;
        mpz_gcd(g.backend().data(), Integer(numerator(a)).backend().data(),
                Integer(denominator(a)).backend().data());
        REQUIRE(g == 1);
    }
}
