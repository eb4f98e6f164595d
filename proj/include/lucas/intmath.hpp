#pragma once

// Integer primitives shared by the rest of the library. Most routines come in
// two flavours, std::uint64_t for exhaustive sweeps and BigInt for user input;
// the templated algorithms below only rely on the overload set in this header.

#include <bit>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "lucas/types.hpp"

namespace lucas {

// ---------------------------------------------------------------------------
// Overload set used by templated algorithms
// ---------------------------------------------------------------------------

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}
inline BigInt mul_mod(const BigInt& a, const BigInt& b, const BigInt& m) { return a * b % m; }

/// Operands must already be reduced into [0, m).
inline u64 add_mod(u64 a, u64 b, u64 m) {
    const u64 s = a + b;
    return (s >= m || s < a) ? s - m : s;
}
inline BigInt add_mod(const BigInt& a, const BigInt& b, const BigInt& m) {
    BigInt s = a + b;
    if (s >= m) s -= m;
    return s;
}

/// Operands must already be reduced into [0, m).
inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }
inline BigInt sub_mod(const BigInt& a, const BigInt& b, const BigInt& m) {
    BigInt d = a - b;
    if (d < 0) d += m;
    return d;
}

inline std::size_t bit_length(u64 x) { return static_cast<std::size_t>(std::bit_width(x)); }
inline std::size_t bit_length(const BigInt& x) {
    return x == 0 ? 0 : static_cast<std::size_t>(boost::multiprecision::msb(x)) + 1;
}

inline bool test_bit(u64 x, std::size_t i) { return ((x >> i) & 1U) != 0; }
inline bool test_bit(const BigInt& x, std::size_t i) {
    return boost::multiprecision::bit_test(x, static_cast<unsigned>(i));
}

inline unsigned low_bits(u64 x, unsigned mask) { return static_cast<unsigned>(x & mask); }
inline unsigned low_bits(const BigInt& x, unsigned mask) {
    return static_cast<unsigned>(boost::multiprecision::integer_modulus(x, mask + 1U));
}

inline u64 gcd(u64 a, u64 b) {
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}
inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

/// Least nonnegative residue of a modulo m (m > 0), also for negative a.
inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}
inline u64 mod_floor(i64 a, u64 m) {
    if (a >= 0) return static_cast<u64>(a) % m;
    const u64 r = static_cast<u64>(-(a + 1)) % m;  // avoids overflow on INT64_MIN
    return m - 1 - r;
}

// ---------------------------------------------------------------------------
// Modular exponentiation
// ---------------------------------------------------------------------------

u64 mod_pow(u64 base, u64 exponent, u64 modulus);
BigInt mod_pow(const BigInt& base, const BigInt& exponent, const BigInt& modulus);

// ---------------------------------------------------------------------------
// Jacobi symbol
// ---------------------------------------------------------------------------

namespace detail {

// Binary reciprocity iteration; a in [0, n), n odd and positive.
template <class Int>
int jacobi_reduced(Int a, Int n) {
    int t = 1;
    while (a != 0) {
        while (low_bits(a, 1) == 0) {
            a >>= 1;
            const unsigned r = low_bits(n, 7);
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (low_bits(a, 3) == 3 && low_bits(n, 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace detail

/// Jacobi symbol (a/n). Throws std::invalid_argument unless n is odd and positive.
int jacobi(const BigInt& a, const BigInt& n);
int jacobi(i64 a, u64 n);

// ---------------------------------------------------------------------------
// Roots and 2-adic valuation
// ---------------------------------------------------------------------------

/// floor(sqrt(n)) by Newton iteration seeded from the bit length.
BigInt isqrt_newton(const BigInt& n);
u64 isqrt_newton(u64 n);

template <class Int>
struct TwoAdicSplit {
    unsigned kappa = 0;
    Int q{};
};

/// m = 2^kappa * q with q odd. Throws std::invalid_argument for m == 0.
template <class Int>
TwoAdicSplit<Int> two_adic_split(Int m) {
    if (m == 0) throw std::invalid_argument("two_adic_split: m must be positive");
    TwoAdicSplit<Int> out;
    while (low_bits(m, 1) == 0) {
        m >>= 1;
        ++out.kappa;
    }
    out.q = std::move(m);
    return out;
}

// ---------------------------------------------------------------------------
// Primes
// ---------------------------------------------------------------------------

/// Sieve of Eratosthenes limit above which sieve_primes refuses to run.
inline constexpr u64 kDefaultSieveBudget = u64{1} << 27;

/// All primes <= limit, ascending. Throws BudgetExceeded when limit > max_limit.
std::vector<u64> sieve_primes(u64 limit, u64 max_limit = kDefaultSieveBudget);

/// The l-th odd prime (3 is the first). Throws std::invalid_argument for l == 0.
u64 nth_odd_prime(std::size_t l);

/// Deterministic primality for n < 2^64. For larger n it is deterministic below
/// 3.3e24 and falls back to GMP's BPSW-based test above that.
bool is_prime_oracle(u64 n);
bool is_prime_oracle(const BigInt& n);

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct PrimePower {
    BigInt prime;
    unsigned exponent = 0;

    bool operator==(const PrimePower&) const = default;
};

/// Prime decomposition, ascending by prime.
struct Factorization {
    std::vector<PrimePower> entries;

    BigInt value() const;
    /// Number of distinct primes (omega).
    std::size_t distinct() const { return entries.size(); }
    /// Number of primes counted with multiplicity (Omega).
    unsigned total() const;

    bool operator==(const Factorization&) const = default;
};

struct FactorConfig {
    u64 trial_limit = 1'000'000;
    u64 rho_iterations = u64{1} << 22;
    unsigned rho_attempts = 24;
    u64 seed = 0x5eed'1e55'c0ffee01ULL;
};

class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Trial division followed by Brent's rho; every factor is certified by
/// is_prime_oracle. Throws FactorizationError when the budget runs out.
Factorization factorize(const BigInt& n, const FactorConfig& config = {});
Factorization factorize(u64 n, const FactorConfig& config = {});

// ---------------------------------------------------------------------------
// Random sampling
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection sampling on masked words.
u64 uniform_below(u64 bound, Rng& rng);
BigInt uniform_below(const BigInt& bound, Rng& rng);

/// SplitMix64 finalizer; derives independent stream seeds from (seed, index).
u64 derive_seed(u64 seed, u64 index);

}  // namespace lucas
