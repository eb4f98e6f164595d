#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace lucas {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Arbitrary-precision signed integer (GMP backed, no expression templates).
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Exact rational, always kept in lowest terms.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// 50 decimal digits (166-bit significand) MPFR float used by the bound evaluators.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<50>,
                                           boost::multiprecision::et_off>;

/// Significand bits carried by Real.
inline constexpr int kRealBits = 166;

/// Raised when an operation would exceed a configured work or memory budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when parameters fall outside a theorem's stated hypothesis range and
/// the caller asked for a hard gate.
class HypothesisGate : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline std::string to_string(const BigInt& x) { return x.str(); }

/// "p/q" (or "p" when the denominator is 1).
inline std::string to_string(const Rational& x) {
    const BigInt num = boost::multiprecision::numerator(x);
    const BigInt den = boost::multiprecision::denominator(x);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

}  // namespace lucas
