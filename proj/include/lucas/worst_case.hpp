#pragma once

// The sets C_{m,D} = { composite n : gcd(n, 2D) = 1, alpha_D(n) > 2^-m } and the
// structural description of C_{3,D}.

#include <optional>
#include <string_view>
#include <vector>

#include "lucas/sl_census.hpp"

namespace lucas {

/// Exact test of alpha_D(n) > 2^-m. False for primes and for gcd(n, 2D) > 1.
bool c_m_member(const BigInt& n, const BigInt& D, unsigned m, const FactorConfig& config = {});

enum class C3Tag {
    SquareOfSmallPrime,     ///< 9 or 25 (49 only reaches alpha = 1/8)
    TwinPair,               ///< (2^k q - 1)(2^k q + 1)
    TripleShift,            ///< (2^k q + e1)(3 2^k q + e2), k = 1 and q >= 5
    DoubleShift,            ///< (2^k q + e1)(2 2^k q + e2), (q, k) != (1, 1)
    TripleLucasCarmichael,  ///< p1 p2 p3 with p_i - e_i | n - e(n) and equal k_i
    NotInC3,
};

std::string_view to_string(C3Tag tag);

struct C3Form {
    C3Tag tag = C3Tag::NotInC3;
    /// Prime factors realizing the form, ascending.
    std::vector<BigInt> primes;
    /// Jacobi signs (D/p) matching `primes`.
    std::vector<int> eps_signs;
    /// Common 2-adic exponent and odd part of the base term 2^k1 q1, when the
    /// form has one.
    std::optional<unsigned> k1;
    std::optional<BigInt> q1;
    /// Set when n has one of the shapes but its alpha is at most 1/8
    /// (e.g. a DoubleShift with (q1, k1) = (1, 1)); tag is NotInC3 then.
    std::optional<C3Tag> excluded_shape;
    /// alpha_D(n) from the shape's own closed form in (k1, q1); absent for
    /// the three-prime form.
    std::optional<Rational> form_alpha;
};

/// Structural membership in C_{3,D}: factors n (primality via the oracle),
/// evaluates the actual Jacobi signs for D, and matches the classified shapes.
/// Two-prime and square shapes are decided by their closed-form alpha:
///   twin    4^-k1 ((1 - 1/q1)^2 + (4^k1 - 1)/3)
///   triple  4^-k1 ((1 - 1/q1)^2 / 3 + (4^k1 - 1)/9)
///   double  (1 - 1/q1)^2 / (2 4^k1) + (4^k1 - 1) / (6 4^k1)
/// and alpha(p^2) in {1/6, 1/4}, {3/20, 1/6}, {5/42, 1/8} for p = 3, 5, 7.
C3Form classify_c3(const BigInt& n, const BigInt& D, const FactorConfig& config = {});

/// Closed form of SL/phi_D over the decomposition:
///   2^{-sum k_i} prod p^{1-r} ( prod (g_i - 1)/q_i + (2^{s k1} - 1)/(2^s - 1) prod g_i/q_i )
/// with g_i = gcd(q, q_i).
Rational alpha_exact_formula(const EpsDecomp& decomp);

/// alpha_D of a twin product with q1 = 1: 1/3 - 1/(3 4^k1). Requires k1 >= 1.
Rational twin_alpha(unsigned k1);

struct DensityCheck {
    unsigned k = 0;
    unsigned m = 0;
    u64 members = 0;
    /// |M_k| = 2^{k-2}
    u64 total = 0;
    Rational observed;
    /// 8 sum_{j=2}^m 2^{m - j - (k-1)/j}
    Real bound;
    bool holds = false;
};

/// True when m + 1 <= 2 sqrt(k - 1), checked in integers.
bool density_hypothesis(unsigned k, unsigned m);

/// The density bound 8 sum_{j=2}^m 2^{m-j-(k-1)/j}.
Real density_bound(unsigned k, unsigned m);

/// Largest k accepted by the exhaustive density sweeps.
inline constexpr unsigned kMaxDensityBits = 22;

/// Exhaustive count of C_{m,D} over the odd k-bit integers, against the bound.
/// Throws HypothesisGate when m + 1 > 2 sqrt(k - 1) and BudgetExceeded when
/// k > kMaxDensityBits.
DensityCheck frac_cm_empirical(unsigned k, unsigned m, const BigInt& D);

/// Same for every m = 1 .. m_max admitted by the hypothesis, sharing one sweep.
std::vector<DensityCheck> frac_cm_empirical_all(unsigned k, const BigInt& D);

}  // namespace lucas
