#pragma once

// Exact census of strong Lucas liars: SL(D, n) from the closed-form count over
// the prime decomposition, the multiplicative phi_D, and the derived ratios.
// Everything here is exact integer or rational arithmetic.

#include <vector>

#include "lucas/intmath.hpp"

namespace lucas {

/// Per-prime data for p^r || n: eps = (D/p) and p - eps = 2^k q with q odd.
struct PrimeSplit {
    BigInt p;
    unsigned r = 0;
    int eps = 0;
    unsigned k = 0;
    BigInt q;
};

/// Signs and 2-adic splits of n and of each prime factor, primes ordered by
/// ascending k (ties broken by ascending p).
struct EpsDecomp {
    BigInt n;
    BigInt D;
    int eps_n = 0;
    unsigned kappa = 0;
    BigInt q;
    std::vector<PrimeSplit> primes;

    std::size_t s() const { return primes.size(); }
    unsigned k1() const { return primes.front().k; }
    unsigned delta(std::size_t i) const { return primes.at(i).k - k1(); }
    unsigned big_omega() const;
};

/// Throws std::invalid_argument unless n is odd, >= 3 and gcd(n, 2D) = 1.
EpsDecomp epsilon_decompose(const BigInt& n, const BigInt& D, const Factorization& factorization);
EpsDecomp epsilon_decompose(const BigInt& n, const BigInt& D, const FactorConfig& config = {});

/// The closed-form count
///   SL = prod (gcd(q, q_i) - 1) + sum_{j < k_1} 2^{j s} prod gcd(q, q_i).
BigInt sl_count(const EpsDecomp& decomp);
/// SL(D, n); 0 whenever gcd(n, 2D) > 1.
BigInt sl_count(const BigInt& n, const BigInt& D, const FactorConfig& config = {});

/// phi_D(p^r) = p^{r-1} (p - eps(p)), extended multiplicatively.
BigInt phi_D(const EpsDecomp& decomp);
BigInt phi_D(const BigInt& n, const BigInt& D, const FactorConfig& config = {});

/// Number of P in [0, n) whose Q = (P^2 - D)/4 is a unit mod n:
/// prod p^{r-1} (p - 1 - eps(p)).
BigInt admissible_pairs(const EpsDecomp& decomp);

struct AlphaReport {
    BigInt sl;
    BigInt phi_d;
    BigInt admissible;
    /// SL / phi_D.
    Rational alpha;
    /// SL / (n - eps(n) - 1), the per-round pass rate used in the averaging sum.
    Rational alpha_bar;
    /// SL / admissible, the pass rate under uniformly sampled admissible bases.
    Rational alpha_bar_admissible;
};

AlphaReport alpha_report(const EpsDecomp& decomp);
AlphaReport alpha_report(const BigInt& n, const BigInt& D, const FactorConfig& config = {});

/// Default enumeration budget for brute_force_sl.
inline constexpr u64 kBruteForceBudget = 5000;

/// Direct enumeration of P in [0, n): counts admissible bases that pass the
/// strong Lucas round. Independent of the closed form; returns 0 when
/// gcd(n, 2D) > 1. Throws BudgetExceeded when n > budget.
u64 brute_force_sl(u64 n, i64 D, u64 budget = kBruteForceBudget);

// ---------------------------------------------------------------------------
// Inequalities that constrain alpha_D
// ---------------------------------------------------------------------------

struct AlphaUpperBounds {
    /// 2^{1-s} prod p^{1-r} gcd(p - eps, n - eps(n)) / (p - eps)
    Rational per_prime;
    /// 2^{1-Omega} prod gcd(p - eps, n - eps(n)) / (p - eps)
    Rational omega_gcd;
    /// 2^{1-Omega}
    Rational omega;
};

AlphaUpperBounds alpha_upper_bounds(const EpsDecomp& decomp);

/// Parity criterion: kappa == k_1 iff the number of primes with odd exponent
/// and k_i == k_1 is odd. Returns the predicted truth value of kappa == k_1.
bool kappa_equals_k1_predicted(const EpsDecomp& decomp);

/// An n with eps(p) = -1 for every prime factor, so that
/// phi_D(n) = prod (p^r + p^{r-1}). Primes are the smallest eligible ones at
/// or above `start`. Throws std::invalid_argument if D is a perfect square.
struct InertProduct {
    BigInt n;
    Factorization factorization;
};

InertProduct construct_inert_product(const BigInt& D, const std::vector<unsigned>& exponents,
                                     u64 start = 3);

}  // namespace lucas
