#pragma once

// Closed-form upper bounds on the probability that the generator returns a
// composite, for the strong Lucas test and (for comparison) Miller-Rabin.
//
// Every bound is a product of powers, so -log2 of it is assembled as a sum of
// exactly rounded logarithms rather than as the log of a rounded product. That
// keeps cells such as k = 512, t = 2 of the Miller-Rabin table at exactly 45.
// "log" in every formula is the natural logarithm.

#include <optional>
#include <string>
#include <vector>

#include "lucas/types.hpp"

namespace lucas {

struct BoundQuery {
    unsigned k = 2;
    unsigned t = 1;
    unsigned l = 0;
};

struct BoundReport {
    std::string theorem;
    BoundQuery query;
    Real value;
    /// -log2(value) at full precision.
    Real neg_log2_exact;
    /// floor(-log2(value)), snapped to the integer when the exact value is one.
    long neg_log2 = 0;
    bool hypotheses_met = false;
    /// |neg_log2_exact - nearest integer| < 1e-6.
    bool near_integer_boundary = false;
    /// floor(neg_log2_exact) unchanged under a +-2 ulp perturbation.
    bool stable_under_perturbation = true;
};

/// 1 + 1/p where p is the (l+1)-th odd prime.
Real rho(unsigned l);

/// OpenSSL's trial-division schedule: 63, 127, 383, 1023 for k up to 512,
/// 1024, 2048, 4096; 1023 beyond 4096.
unsigned calc_trial_divisions(unsigned k);

/// log(k) k^2 4^{2.3 - sqrt k}
BoundReport bound_q_k1(unsigned k);
/// log^t(k) k^{3/2} 2^t / sqrt(t) 4^{2.12 - sqrt(tk)}; hypotheses k >= 79 with
/// 3 <= t <= k/9, or k >= 88 with t = 2.
BoundReport bound_q_kt(unsigned k, unsigned t);
/// k^2 4^{1.8 - sqrt k} rho_l^{2 sqrt(k-1) - 2}
BoundReport bound_q_kl1(unsigned k, unsigned l);
/// k^2 4^{1.729 - 0.998 sqrt(k-1)} (the l = 127 specialization)
BoundReport bound_q_kl1_127(unsigned k);
/// 4^{1.72 - sqrt(tk)} k^{3/2} 2^t rho_l^{2 sqrt(kt) + t}; hypotheses
/// k >= 21, 2 <= t <= (k-1)/9.
BoundReport bound_q_klt(unsigned k, unsigned t, unsigned l);
/// Three-term bound for large t; hypotheses k >= 122, t >= k/9.
BoundReport bound_q_klt_large_t(unsigned k, unsigned t, unsigned l);

enum class MillerRabinCase { T1, Moderate, LargeT, VeryLargeT };

/// One case of the Miller-Rabin average-case bound, hypotheses flagged.
BoundReport bound_p_kt_case(unsigned k, unsigned t, MillerRabinCase which);
/// Smallest applicable case; falls back to the moderate-t formula (flagged)
/// when no case's hypotheses hold.
BoundReport bound_p_kt(unsigned k, unsigned t);

struct GatedValue {
    Real value;
    bool hypotheses_met = false;
};

/// 0.71867 2^k / k, a lower bound on the number of k-bit primes for k >= 21.
GatedValue bound_prime_count(unsigned k);
/// 6 2^{k/2} / k^2, bound on k-bit twin-prime products for k >= 122.
GatedValue bound_twin_products(unsigned k);
/// 16 C2 x / ((7.5 + log x) log x), twin prime counting bound for x > e^42.
GatedValue twin_prime_count_bound(const Real& x);

/// Twin prime constant C2 = prod_{p>2} p(p-2)/(p-1)^2.
Real twin_prime_constant();

/// Evaluates a bound by theorem name: q_k1, q_kt, q_kl1, q_kl1_127, q_klt,
/// q_klt_large_t, p_kt. Throws std::invalid_argument for unknown names.
BoundReport evaluate_bound(const std::string& theorem, const BoundQuery& query);

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

inline constexpr unsigned kTableRows[] = {100, 200, 400, 512, 1024, 2048, 4096};
inline constexpr unsigned kTableColumns[] = {2, 4, 8, 16, 32, 64};

struct TableCell {
    std::optional<long> value;
    /// "gate:<violated hypothesis>" when value is empty.
    std::string gate;
};

struct BoundTable {
    std::vector<std::string> header;
    std::vector<unsigned> row_keys;
    std::vector<std::vector<TableCell>> cells;
};

/// Table 1: -log2 of p_{k,1}, q_{k,1}, q_{k,l,1}. Tables 2-4: -log2 of q_{k,t},
/// q_{k,l,t} and p_{k,t} over the t columns. l follows calc_trial_divisions.
BoundTable emit_table(int which);

/// CSV rendering, header row first; blank cells carry "gate:<hypothesis>".
std::string to_csv(const BoundTable& table);

}  // namespace lucas
