#pragma once

// The probable-prime generator, exact average-case error for small k, and
// Monte Carlo estimates of the same quantity.

#include <optional>
#include <string>
#include <vector>

#include "lucas/intmath.hpp"

namespace lucas {

struct GenConfig {
    unsigned k = 12;
    unsigned t = 1;
    /// Candidates divisible by one of the first l odd primes are discarded.
    unsigned l = 0;
    BigInt D = 5;
    u64 seed = 0;
    /// Discard candidates of the form p (p + 2) before testing.
    bool twin_precheck = false;
    /// Candidates drawn before giving up with BudgetExceeded.
    u64 candidate_budget = 10'000'000;
};

/// Throws std::invalid_argument unless k >= 4, t >= 1 and D is not a square.
void validate(const GenConfig& config);

struct RunRecord {
    GenConfig config;
    /// Candidates drawn, including those removed by the filters.
    u64 candidates_tested = 0;
    u64 rejected_trial_division = 0;
    u64 rejected_gcd = 0;
    u64 rejected_twin = 0;
    BigInt output;
    /// Adjudicated by is_prime_oracle, never by the tested code path.
    bool output_is_composite = false;
    /// Rounds passed by each candidate that reached the Lucas stage, in order;
    /// the last entry is config.t.
    std::vector<unsigned> rounds_per_candidate;
};

/// Draws odd k-bit n uniformly until one survives trial division, the
/// gcd(n, 2D) check, the optional twin pre-check and t strong Lucas rounds.
/// Deterministic in config.seed.
RunRecord generate_probable_prime(const GenConfig& config);

// ---------------------------------------------------------------------------
// Exact average-case error
// ---------------------------------------------------------------------------

/// Largest k accepted by the exhaustive enumerations.
inline constexpr unsigned kMaxExactBits = 20;
/// Largest k for which the base-enumeration method is allowed.
inline constexpr unsigned kMaxBruteForceBits = 12;

enum class ExactMethod {
    /// alpha_bar from the closed-form liar count.
    ClosedForm,
    /// alpha_bar from enumerating every P in [0, n) and running the test.
    BaseEnumeration,
};

struct ExactQuery {
    unsigned k = 8;
    unsigned t = 1;
    BigInt D = 5;
    unsigned l = 0;
    ExactMethod method = ExactMethod::ClosedForm;
};

struct ExactResult {
    ExactQuery query;
    /// Odd k-bit n surviving trial division.
    u64 candidates = 0;
    u64 composites = 0;
    /// Primes among the candidates that are coprime to 2D.
    u64 primes = 0;
    /// Sum over composites of (SL / (n - eps(n) - 1))^t.
    Rational alpha_bar_sum;
    /// Sum over composites of (SL / admissible(n))^t: the pass rate when every
    /// draw with gcd(Q, n) > 1 is resampled.
    Rational admissible_sum;
    /// Sum over composites of (SL / (n - z(n)))^t with z(n) the number of P
    /// with P^2 = D (mod n): the pass rate of generate_probable_prime, which
    /// resamples only Q = 0 and treats a proper gcd(Q, n) as a failed round.
    Rational generator_sum;
    /// Sum over primes of (admissible(p) / (p - eps(p) - 1))^t. Every prime
    /// has admissible(p) = p - eps(p) - 1, so this equals `primes`.
    Rational prime_alpha_bar_sum;
    /// alpha_bar_sum / (alpha_bar_sum + primes). Headline value.
    Rational q;
    Rational q_admissible;
    /// Exact composite-output probability of generate_probable_prime.
    Rational q_generator;
};

/// Exhaustive sweep over the odd k-bit n not divisible by the first l odd
/// primes; composites with gcd(n, 2D) > 1 contribute zero. Throws
/// BudgetExceeded above kMaxExactBits (kMaxBruteForceBits for
/// BaseEnumeration).
ExactResult exact_qkt_small(const ExactQuery& query);

/// exact_qkt_small(...).alpha_bar_sum
Rational enumerate_alpha_bar_sum(unsigned k, unsigned t, const BigInt& D, unsigned l,
                                 ExactMethod method = ExactMethod::ClosedForm);

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

struct McSummary {
    GenConfig config;
    u64 trials = 0;
    u64 composites = 0;
    double estimate = 0;
    /// sqrt(estimate (1 - estimate) / trials)
    double se = 0;
    std::optional<Rational> exact;
};

/// Runs `trials` generations; trial i uses seed derive_seed(config.seed, i),
/// so the result does not depend on `threads`. Records are returned in trial
/// order when `records` is non-null.
McSummary monte_carlo_qkt(const GenConfig& config, u64 trials, unsigned threads = 1,
                          std::vector<RunRecord>* records = nullptr);

/// Header row of the summary CSV.
std::string mc_csv_header();
/// One CSV row: k,t,l,D,trials,composites,estimate,se,exact_value_if_available.
std::string mc_csv_row(const McSummary& summary);

}  // namespace lucas
