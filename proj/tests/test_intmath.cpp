#include "doctest.h"

#include <random>

#include "lucas/intmath.hpp"
#include "oracles.hpp"

using namespace lucas;

TEST_CASE("jacobi examples") {
    CHECK(jacobi(BigInt(1), BigInt(15)) == 1);
    CHECK(jacobi(BigInt(2), BigInt(3)) == -1);
    CHECK(jacobi(BigInt(14), BigInt(5)) == 1);
    CHECK(jacobi(BigInt(5), BigInt(1)) == 1);
    CHECK(jacobi(BigInt(-7), BigInt(9)) == 1);
    CHECK(jacobi(BigInt(6), BigInt(9)) == 0);
    CHECK_THROWS_AS(jacobi(BigInt(3), BigInt(10)), std::invalid_argument);
    CHECK_THROWS_AS(jacobi(BigInt(3), BigInt(-5)), std::invalid_argument);
    CHECK_THROWS_AS(jacobi(i64(3), u64(0)), std::invalid_argument);
}

TEST_CASE("jacobi equals the product of Euler-criterion Legendre symbols") {
    for (u64 n = 3; n <= 10'000; n += 2) {
        const u64 step = n < 400 ? 1 : n / 97;  // full sweep on small n, a stride above
        for (u64 a = 0; a < n; a += step) {
            const int expected = oracle::jacobi_by_factoring(static_cast<long long>(a), n);
            REQUIRE(jacobi(static_cast<i64>(a), n) == expected);
            REQUIRE(jacobi(BigInt(a), BigInt(n)) == expected);
        }
        // negative arguments through both overloads
        REQUIRE(jacobi(-static_cast<i64>(n / 3 + 1), n) ==
                oracle::jacobi_by_factoring(-static_cast<long long>(n / 3 + 1), n));
    }
}

TEST_CASE("isqrt_newton") {
    CHECK(isqrt_newton(BigInt(49)) == 7);
    CHECK(isqrt_newton(BigInt(48)) == 6);
    CHECK(isqrt_newton(BigInt(0)) == 0);
    CHECK(isqrt_newton(u64(0)) == 0);
    CHECK(isqrt_newton(~u64(0)) == 0xFFFFFFFFULL);
    for (u64 n = 0; n < 100'000; ++n) {
        const u64 r = isqrt_newton(n);
        REQUIRE(r * r <= n);
        REQUIRE((r + 1) * (r + 1) > n);
    }
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100'000; ++i) {
        BigInt n = 0;
        const int words = 1 + static_cast<int>(rng() % 4);
        for (int w = 0; w < words; ++w) n = (n << 64) + BigInt(rng());
        const BigInt r = isqrt_newton(n);
        REQUIRE(r * r <= n);
        REQUIRE((r + 1) * (r + 1) > n);
        if (i % 100 == 0) REQUIRE(r.str() == oracle::gmp_isqrt(n.str()));
    }
}

TEST_CASE("two_adic_split") {
    CHECK(two_adic_split(BigInt(12)).kappa == 2);
    CHECK(two_adic_split(BigInt(12)).q == 3);
    CHECK(two_adic_split(BigInt(1)).kappa == 0);
    CHECK(two_adic_split(BigInt(1)).q == 1);
    CHECK(two_adic_split(BigInt(16)).kappa == 4);
    CHECK(two_adic_split(BigInt(16)).q == 1);
    CHECK_THROWS_AS(two_adic_split(BigInt(0)), std::invalid_argument);
    for (u64 m = 1; m <= 100'000; ++m) {
        const auto s = two_adic_split<u64>(m);
        REQUIRE(s.q % 2 == 1);
        REQUIRE((s.q << s.kappa) == m);
    }
}

TEST_CASE("mod_pow") {
    CHECK(mod_pow(u64(2), u64(10), u64(1000)) == 24);
    CHECK(mod_pow(u64(123), u64(0), u64(7)) == 1);
    CHECK(mod_pow(u64(5), u64(0), u64(1)) == 0);
    CHECK(mod_pow(u64(7), u64(560), u64(561)) == 1);
    CHECK(mod_pow(BigInt(7), BigInt(560), BigInt(561)) == 1);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const u64 m = (rng() >> 1) | 1, b = rng(), e = rng() % 100'000;
        REQUIRE(mod_pow(b, e, m) == oracle::pow_mod(b, e, m));
        REQUIRE(mod_pow(BigInt(b), BigInt(e), BigInt(m)) == oracle::pow_mod(b, e, m));
    }
}

TEST_CASE("sieve_primes") {
    CHECK(sieve_primes(10) == std::vector<u64>{2, 3, 5, 7});
    CHECK(sieve_primes(2) == std::vector<u64>{2});
    CHECK(sieve_primes(1).empty());
    CHECK_THROWS_AS(sieve_primes(u64{1} << 28), BudgetExceeded);
    const auto primes = sieve_primes(u64{1} << 20);
    CHECK(primes.size() == oracle::segmented_prime_count(0, (u64{1} << 20) + 1));
    const auto flags = oracle::sieve_flags(100'000);
    std::size_t idx = 0;
    for (u64 n = 0; n <= 100'000; ++n) {
        if (!flags[n]) continue;
        REQUIRE(primes[idx++] == n);
    }
}

TEST_CASE("nth_odd_prime") {
    CHECK(nth_odd_prime(1) == 3);
    CHECK(nth_odd_prime(2) == 5);
    CHECK(nth_odd_prime(128) == 727);
    CHECK(nth_odd_prime(1024) == 8167);
    CHECK_THROWS_AS(nth_odd_prime(0), std::invalid_argument);
    u64 p = 2;
    for (std::size_t l = 1; l <= 3000; ++l) {
        do ++p;
        while (!oracle::is_prime_trial(p));
        REQUIRE(nth_odd_prime(l) == p);
    }
}

TEST_CASE("is_prime_oracle") {
    CHECK(is_prime_oracle(u64(2)));
    CHECK_FALSE(is_prime_oracle(u64(9)));
    CHECK(is_prime_oracle(u64(2147483647)));
    CHECK_FALSE(is_prime_oracle(u64(0)));
    CHECK_FALSE(is_prime_oracle(u64(1)));
    const auto flags = oracle::sieve_flags(1'000'000);
    for (u64 n = 0; n <= 1'000'000; ++n) REQUIRE(is_prime_oracle(n) == flags[n]);
    // strong pseudoprimes to several small bases
    for (u64 n : {2047ULL, 3215031751ULL, 2152302898747ULL, 3474749660383ULL, 341550071728321ULL,
                  3825123056546413051ULL})
        CHECK_FALSE(is_prime_oracle(n));
    CHECK(is_prime_oracle(u64(2305843009213693951ULL)));  // 2^61 - 1
    CHECK(is_prime_oracle(u64(18446744073709551557ULL)));  // largest 64-bit prime
    CHECK(is_prime_oracle((BigInt(1) << 89) - 1));
    CHECK(is_prime_oracle((BigInt(1) << 127) - 1));
    CHECK_FALSE(is_prime_oracle((BigInt(1) << 128) + 1));
    CHECK_FALSE(is_prime_oracle(BigInt("318665857834031151167461")));  // spsp to the first 12 prime bases
    CHECK_FALSE(is_prime_oracle(BigInt("3317044064679887385961981")));  // spsp to the first 13 prime bases
    CHECK_FALSE(is_prime_oracle(BigInt(-7)));
}

TEST_CASE("factorize") {
    CHECK(factorize(u64(9)) == Factorization{{{3, 2}}});
    CHECK(factorize(u64(15)) == Factorization{{{3, 1}, {5, 1}}});
    CHECK(factorize(u64(1024)) == Factorization{{{2, 10}}});
    CHECK(factorize(BigInt(1024)) == Factorization{{{2, 10}}});
    CHECK_THROWS(factorize(BigInt(1)));

    for (u64 n = 2; n <= 100'000; ++n) {
        const auto f = factorize(n);
        REQUIRE(f.value() == n);
        for (std::size_t i = 0; i < f.entries.size(); ++i) {
            REQUIRE(oracle::is_prime_trial(f.entries[i].prime.convert_to<u64>()));
            REQUIRE(f.entries[i].exponent >= 1);
            if (i) REQUIRE(f.entries[i - 1].prime < f.entries[i].prime);
        }
    }

    std::mt19937_64 rng(3);
    const auto random_prime = [&](u64 lo, u64 hi) {
        for (;;) {
            const u64 c = lo + rng() % (hi - lo);
            if (oracle::is_prime_trial(c)) return c;
        }
    };
    for (int i = 0; i < 1000; ++i) {
        u64 p = random_prime(u64{1} << 31, u64{1} << 32);
        u64 q = random_prime(u64{1} << 31, u64{1} << 32);
        if (p > q) std::swap(p, q);
        const u64 n = p * q;
        const Factorization expected =
            p == q ? Factorization{{{p, 2}}} : Factorization{{{p, 1}, {q, 1}}};
        REQUIRE(factorize(n) == expected);
    }
    // beyond 64 bits
    const BigInt big = BigInt("1000000000039") * BigInt("1000000000061") * BigInt(3) * BigInt(3);
    const auto f = factorize(big);
    CHECK(f.value() == big);
    CHECK(f.distinct() == 3);
    CHECK(f.total() == 4);
}

TEST_CASE("factorize reports budget failure") {
    FactorConfig tight;
    tight.trial_limit = 100;
    tight.rho_iterations = 4;
    tight.rho_attempts = 1;
    const BigInt n = BigInt("1000000000039") * BigInt("1000000000061");
    CHECK_THROWS_AS(factorize(n, tight), FactorizationError);
}

TEST_CASE("uniform_below and derive_seed") {
    Rng rng(1);
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70'000; ++i) ++hist[uniform_below(u64(7), rng)];
    for (int c : hist) CHECK(std::abs(c - 10'000) < 500);
    const BigInt bound = (BigInt(1) << 100) + 3;
    int upper_half = 0;
    for (int i = 0; i < 1000; ++i) {
        const BigInt x = uniform_below(bound, rng);
        REQUIRE(x >= 0);
        REQUIRE(x < bound);
        if (x >= bound / 2) ++upper_half;
    }
    CHECK(std::abs(upper_half - 500) < 100);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}
