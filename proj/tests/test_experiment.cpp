#include "doctest.h"

#include <cmath>
#include <sstream>

#include "lucas/bounds.hpp"
#include "lucas/experiment.hpp"
#include "lucas/json_io.hpp"
#include "oracles.hpp"

using namespace lucas;

namespace {

const i64 kPanel[] = {5, -7, 13, 17, 21, -11};

struct OracleExact {
    u64 candidates = 0;
    u64 primes = 0;
    Rational alpha_bar_sum, admissible_sum, generator_sum;
};

Rational power(const Rational& x, unsigned t) {
    Rational r = 1;
    for (unsigned i = 0; i < t; ++i) r *= x;
    return r;
}

// Direct sweep of the odd k-bit integers with the recurrence and
// trial-division oracles.
OracleExact oracle_exact(unsigned k, unsigned t, i64 D, unsigned l) {
    std::vector<u64> small;
    for (u64 p = 3; small.size() < l; p += 2)
        if (oracle::is_prime_trial(p)) small.push_back(p);
    OracleExact out;
    const u64 absd = static_cast<u64>(D < 0 ? -D : D);
    for (u64 n = (u64{1} << (k - 1)) + 1; n < (u64{1} << k); n += 2) {
        bool divisible = false;
        for (u64 p : small) divisible = divisible || n % p == 0;
        if (divisible) continue;
        ++out.candidates;
        const bool coprime = std::gcd(n, absd) == 1;
        if (oracle::is_prime_trial(n)) {
            if (coprime) ++out.primes;
            continue;
        }
        if (!coprime) continue;
        const u64 sl = oracle::sl_by_recurrence(n, D);
        const int eps = oracle::jacobi_by_factoring(D, n);
        const u64 d = static_cast<u64>(((D % static_cast<i64>(n)) + static_cast<i64>(n)) % static_cast<i64>(n));
        u64 admissible = 0, roots = 0;
        for (u64 p = 0; p < n; ++p) {
            const u64 target = (p * p % n + n - d) % n;
            if (target == 0) ++roots;
            u64 q = 0;
            while ((4 * q) % n != target) ++q;
            if (std::gcd(q, n) == 1) ++admissible;
        }
        out.alpha_bar_sum += power(Rational(sl, n - eps - 1), t);
        out.admissible_sum += power(Rational(sl, admissible), t);
        out.generator_sum += power(Rational(sl, n - roots), t);
    }
    return out;
}

ExactResult exact(unsigned k, unsigned t, i64 D, unsigned l = 0, ExactMethod m = ExactMethod::ClosedForm) {
    ExactQuery q;
    q.k = k;
    q.t = t;
    q.D = D;
    q.l = l;
    q.method = m;
    return exact_qkt_small(q);
}

}  // namespace

TEST_CASE("exact sums agree with the direct oracle sweep") {
    for (i64 D : kPanel)
        for (unsigned t : {1u, 2u, 3u})
            for (unsigned l : {0u, 2u}) {
                const auto r = exact(8, t, D, l);
                const auto o = oracle_exact(8, t, D, l);
                REQUIRE(r.candidates == o.candidates);
                REQUIRE(r.primes == o.primes);
                REQUIRE(r.alpha_bar_sum == o.alpha_bar_sum);
                REQUIRE(r.admissible_sum == o.admissible_sum);
                REQUIRE(r.generator_sum == o.generator_sum);
                REQUIRE(r.prime_alpha_bar_sum == Rational(o.primes));
                REQUIRE(r.q == o.alpha_bar_sum / (o.alpha_bar_sum + o.primes));
                REQUIRE(r.q_admissible == o.admissible_sum / (o.admissible_sum + o.primes));
                REQUIRE(r.q_generator == o.generator_sum / (o.generator_sum + o.primes));
            }
}

TEST_CASE("closed form and base enumeration agree exactly") {
    for (unsigned k : {8u, 10u, 12u})
        for (unsigned t : {1u, 2u, 3u})
            for (i64 D : kPanel) {
                const auto a = exact(k, t, D, 0, ExactMethod::ClosedForm);
                const auto b = exact(k, t, D, 0, ExactMethod::BaseEnumeration);
                REQUIRE(a.alpha_bar_sum == b.alpha_bar_sum);
                REQUIRE(a.generator_sum == b.generator_sum);
                REQUIRE(a.admissible_sum == b.admissible_sum);
                REQUIRE(a.q == b.q);
            }
}

TEST_CASE("regression constants") {
    const auto r8 = exact(8, 1, 5);
    CHECK(r8.candidates == 64);
    CHECK(r8.composites == 41);
    CHECK(r8.primes == 23);
    CHECK(to_string(r8.q) == "47207534163309120984491223444928860028/1914307601791744296430805321941834872937");
    CHECK(enumerate_alpha_bar_sum(8, 1, 5, 0) == r8.alpha_bar_sum);

    const auto r12 = exact(12, 1, 5);
    CHECK(r12.composites == 769);
    CHECK(r12.primes == 255);
    CHECK(abs(Real(r12.q) - Real("0.0086175976447987255951106422236")) < Real("1e-28"));
    CHECK(abs(Real(r12.q_generator) - Real("0.00861701154503223051698106225436")) < Real("1e-28"));
    CHECK(abs(Real(r12.q_admissible) - Real("0.00915696257525138021005915065478")) < Real("1e-28"));
}

TEST_CASE("exact q: dependence on t and l") {
    for (i64 D : kPanel) {
        const auto t1 = exact(8, 1, D);
        const auto t3 = exact(8, 3, D);
        CHECK(t3.q < t1.q);
        CHECK(exact(8, 2, D, 2).q <= exact(8, 2, D, 0).q);
        CHECK(exact(8, 1, D, 2).q <= t1.q);
        // every composite below 256 has a prime factor among 3 .. 13
        const auto none = exact(8, 1, D, 5);
        CHECK(none.composites == 0);
        CHECK(none.q == 0);
    }
    Rational prev = enumerate_alpha_bar_sum(10, 1, 5, 0);
    for (unsigned t = 2; t <= 60; ++t) {
        const Rational s = enumerate_alpha_bar_sum(10, t, 5, 0);
        CHECK(s < prev);
        prev = s;
    }
    MESSAGE("alpha_bar sum at k = 10, t = 60: " << Real(prev).str(6));
    CHECK(Real(prev) < Real("1e-6"));
}

TEST_CASE("exact q sits below the stated bounds") {
    for (unsigned k : {8u, 10u, 12u}) {
        CHECK(Real(exact(k, 1, 5).q) <= bound_q_k1(k).value);
        for (unsigned t : {2u, 3u}) {
            CHECK(Real(exact(k, t, 5).q) <= bound_q_kt(k, t).value);
            CHECK(Real(exact(k, t, 5, 2).q) <= bound_q_klt(k, t, 2).value);
        }
    }
}

TEST_CASE("exact budgets") {
    CHECK_THROWS_AS(exact(21, 1, 5), BudgetExceeded);
    CHECK_THROWS_AS(exact(13, 1, 5, 0, ExactMethod::BaseEnumeration), BudgetExceeded);
}

TEST_CASE("generate_probable_prime") {
    GenConfig c;
    c.k = 12;
    c.t = 1;
    for (u64 seed = 0; seed < 300; ++seed) {
        c.seed = seed;
        const auto r = generate_probable_prime(c);
        const u64 n = static_cast<u64>(r.output);
        REQUIRE(n >= 2048);
        REQUIRE(n < 4096);
        REQUIRE(n % 2 == 1);
        REQUIRE(n % 5 != 0);
        REQUIRE(r.output_is_composite == !oracle::is_prime_trial(n));
        REQUIRE_FALSE(r.rounds_per_candidate.empty());
        REQUIRE(r.rounds_per_candidate.back() == c.t);
        REQUIRE(r.candidates_tested >= r.rounds_per_candidate.size());
        REQUIRE(r.candidates_tested == r.rounds_per_candidate.size() + r.rejected_trial_division +
                                           r.rejected_gcd + r.rejected_twin);
    }

    c.t = 5;
    c.seed = 1234;
    const auto a = generate_probable_prime(c);
    const auto b = generate_probable_prime(c);
    CHECK(a.output == b.output);
    CHECK(a.rounds_per_candidate == b.rounds_per_candidate);

    GenConfig bad;
    bad.k = 3;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad.k = 12;
    bad.t = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad.t = 1;
    bad.D = 9;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    GenConfig tiny;
    tiny.candidate_budget = 1;
    tiny.k = 40;
    tiny.t = 1;
    bool thrown = false;
    for (u64 s = 0; s < 50 && !thrown; ++s) {
        tiny.seed = s;
        try {
            generate_probable_prime(tiny);
        } catch (const BudgetExceeded&) {
            thrown = true;
        }
    }
    CHECK(thrown);
}

TEST_CASE("filters hold on every output") {
    GenConfig c;
    c.k = 16;
    c.t = 1;
    c.l = 5;
    c.twin_precheck = true;
    std::vector<RunRecord> records;
    monte_carlo_qkt(c, 400, 2, &records);
    REQUIRE(records.size() == 400);
    u64 trial_rejections = 0;
    for (const auto& r : records) {
        const u64 n = static_cast<u64>(r.output);
        for (u64 p : {3, 5, 7, 11, 13}) REQUIRE(n % p != 0);
        const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(n + 1)));
        if (root * root == n + 1) REQUIRE_FALSE((oracle::is_prime_trial(root - 1) && oracle::is_prime_trial(root + 1)));
        trial_rejections += r.rejected_trial_division;
    }
    CHECK(trial_rejections > 0);

    // twin products are caught before any Lucas round
    GenConfig big;
    big.k = 64;
    big.twin_precheck = true;
    big.seed = 5;
    const auto r = generate_probable_prime(big);
    CHECK_FALSE(r.output_is_composite);
}

TEST_CASE("Monte Carlo") {
    GenConfig c;
    c.k = 8;
    c.t = 1;
    c.seed = 77;
    const auto one = monte_carlo_qkt(c, 1);
    CHECK((one.estimate == 0.0 || one.estimate == 1.0));
    CHECK(one.trials == 1);

    const auto s1 = monte_carlo_qkt(c, 4000, 1);
    const auto s4 = monte_carlo_qkt(c, 4000, 4);
    CHECK(s1.composites == s4.composites);
    CHECK(s1.estimate == doctest::Approx(static_cast<double>(s1.composites) / 4000));
    CHECK(s1.se == doctest::Approx(std::sqrt(s1.estimate * (1 - s1.estimate) / 4000)));

    const double exact_gen = Real(exact(8, 1, 5).q_generator).convert_to<double>();
    const double se_exact = std::sqrt(exact_gen * (1 - exact_gen) / 4000);
    CHECK(std::abs(s1.estimate - exact_gen) < 3 * se_exact);

    const auto s8 = monte_carlo_qkt(c, 8000, 2);
    const double ratio = s1.se / s8.se;
    CHECK(ratio > 1.15);
    CHECK(ratio < 1.7);
}

TEST_CASE("records and summaries serialize") {
    GenConfig c;
    c.k = 20;
    c.t = 2;
    c.l = 3;
    c.D = -7;
    c.seed = 99;
    const auto r = generate_probable_prime(c);
    const Json j = r;
    const auto back = Json::parse(j.dump()).get<RunRecord>();
    CHECK(back.output == r.output);
    CHECK(back.config.D == c.D);
    CHECK(back.config.l == 3);
    CHECK(back.rounds_per_candidate == r.rounds_per_candidate);
    CHECK(Json(back).dump() == j.dump());

    CHECK(mc_csv_header() == "k,t,l,D,trials,composites,estimate,se,exact_value_if_available");
    McSummary s = monte_carlo_qkt(c, 10);
    s.exact.reset();
    std::string row = mc_csv_row(s);
    CHECK(std::count(row.begin(), row.end(), ',') == 8);
    CHECK(row.rfind("20,2,3,-7,10,", 0) == 0);
}
