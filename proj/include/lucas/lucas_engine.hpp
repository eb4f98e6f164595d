#pragma once

#include <optional>
#include <utility>
#include <variant>

#include "lucas/intmath.hpp"

namespace lucas {

/// A base (P, Q) for the discriminant D, all reduced modulo n.
///
/// Invariants for bases produced by make_base/sample_base: P^2 - 4Q = D (mod n),
/// gcd(Q, n) = 1 and gcd(n, 2D) = 1. `d` holds D mod n; callers keep the signed
/// discriminant themselves.
template <class Int>
struct LucasBase {
    Int p{};
    Int q{};
    Int d{};
    Int n{};
};

/// U_m, V_m and Q^m reduced modulo n.
template <class Int>
struct LucasTerms {
    Int u{};
    Int v{};
    Int q_pow{};
};

/// Lucas sequences by the U-ladder (U_k, U_{k+1}): O(log m) steps and no
/// division by 2, so any modulus n >= 2 works.
template <class Int>
LucasTerms<Int> lucas_uv_mod(const LucasBase<Int>& base, const Int& m) {
    const Int& n = base.n;
    const Int p = base.p % n;
    const Int q = base.q % n;
    Int u0 = 0;            // U_k
    Int u1 = Int(1) % n;   // U_{k+1}
    Int qk = Int(1) % n;   // Q^k
    for (std::size_t i = bit_length(m); i-- > 0;) {
        // U_2k = U_k (2 U_{k+1} - P U_k),  U_{2k+1} = U_{k+1}^2 - Q U_k^2
        const Int two_u1 = add_mod(u1, u1, n);
        const Int u2k = mul_mod(u0, sub_mod(two_u1, mul_mod(p, u0, n), n), n);
        const Int u2k1 = sub_mod(mul_mod(u1, u1, n), mul_mod(q, mul_mod(u0, u0, n), n), n);
        qk = mul_mod(qk, qk, n);
        if (test_bit(m, i)) {
            // U_{2k+2} = P U_{2k+1} - Q U_2k
            u1 = sub_mod(mul_mod(p, u2k1, n), mul_mod(q, u2k, n), n);
            u0 = u2k1;
            qk = mul_mod(qk, q, n);
        } else {
            u0 = u2k;
            u1 = u2k1;
        }
    }
    // V_k = 2 U_{k+1} - P U_k
    Int v = sub_mod(add_mod(u1, u1, n), mul_mod(p, u0, n), n);
    return {std::move(u0), std::move(v), std::move(qk)};
}

/// Outcome of turning a P value into a base.
template <class Int>
struct BaseDraw {
    enum class Kind { Accepted, Rejected, Factor };
    Kind kind = Kind::Rejected;
    LucasBase<Int> base{};
    /// Nontrivial divisor of n when kind == Factor.
    Int factor{};
};

/// Q := (P^2 - D) / 4 mod n for the given P (n odd, d = D mod n).
/// Accepted iff gcd(Q, n) = 1; a proper divisor gcd(Q, n) is reported as Factor.
template <class Int>
BaseDraw<Int> make_base(const Int& n, const Int& d, const Int& p) {
    const Int inv2 = (n + 1) >> 1;
    const Int inv4 = mul_mod(inv2, inv2, n);
    const Int pp = p % n;
    const Int q = mul_mod(sub_mod(mul_mod(pp, pp, n), d % n, n), inv4, n);
    BaseDraw<Int> draw;
    const Int g = gcd(q, n);
    if (g == 1) {
        draw.kind = BaseDraw<Int>::Kind::Accepted;
        draw.base = {pp, q, d % n, n};
    } else if (g != n) {
        draw.kind = BaseDraw<Int>::Kind::Factor;
        draw.factor = g;
    }
    return draw;
}

/// Draws P uniformly from [0, n) and calls make_base. Rejections are normal;
/// resampling P conditions the draw uniformly on admissible pairs.
template <class Int>
BaseDraw<Int> sample_base(const Int& n, const Int& d, Rng& rng) {
    return make_base(n, d, uniform_below(n, rng));
}

/// Strong Lucas condition for a valid base: U_q = 0 or V_{2^i q} = 0 (mod n)
/// for some 0 <= i < kappa, where n - (D/n) = 2^kappa q. Requires gcd(n, 2D) = 1.
template <class Int>
bool strong_lucas_holds(const LucasBase<Int>& base) {
    const Int& n = base.n;
    const int eps = detail::jacobi_reduced<Int>(base.d % n, n);
    if (eps == 0) throw std::invalid_argument("strong_lucas_holds: gcd(n, D) > 1");
    const auto split = two_adic_split<Int>(eps == 1 ? Int(n - 1) : Int(n + 1));
    LucasTerms<Int> t = lucas_uv_mod(base, split.q);
    if (t.u == 0 || t.v == 0) return true;
    Int v = std::move(t.v);
    Int qp = std::move(t.q_pow);
    for (unsigned i = 1; i < split.kappa; ++i) {
        // V_2m = V_m^2 - 2 Q^m
        v = sub_mod(mul_mod(v, v, n), add_mod(qp, qp, n), n);
        if (v == 0) return true;
        qp = mul_mod(qp, qp, n);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Outcomes with machine-checkable witnesses
// ---------------------------------------------------------------------------

enum class Verdict { ProbablePrime, Composite };

/// Base (P, Q) for which the strong Lucas condition fails.
struct LucasWitness {
    BigInt p;
    BigInt q;
};
/// Base a for which the strong probable-prime condition fails.
struct MillerRabinWitness {
    BigInt a;
};
/// A proper divisor of n.
struct FactorWitness {
    BigInt factor;
};
/// n = lower * upper with upper = lower + 2.
struct TwinWitness {
    BigInt lower;
    BigInt upper;
};

using Witness = std::variant<LucasWitness, MillerRabinWitness, FactorWitness, TwinWitness>;

struct TestOutcome {
    Verdict verdict = Verdict::ProbablePrime;
    std::optional<Witness> witness;
    /// Rounds completed (bases that passed) before the verdict.
    unsigned rounds = 0;

    bool probable_prime() const { return verdict == Verdict::ProbablePrime; }
};

/// One round of the strong Lucas test. gcd(n, D) > 1 yields a Composite outcome
/// with the gcd as witness; throws std::invalid_argument when n | D or n is even.
TestOutcome strong_lucas_round(const BigInt& n, const LucasBase<BigInt>& base);

/// One Miller-Rabin round on n - 1 = 2^kappa q with 1 < a < n - 1.
TestOutcome miller_rabin_round(const BigInt& n, const BigInt& a);

/// Detects n = p (p + 2) with p >= 3 via r = isqrt(n + 1), r^2 = n + 1.
std::optional<std::pair<BigInt, BigInt>> twin_product_precheck(const BigInt& n);

struct StrongLucasOptions {
    unsigned rounds = 1;
    bool twin_precheck = false;
    /// Upper bound on rejected P draws per round before giving up.
    unsigned max_rejections = 4096;
};

/// Full test: gcd(n, 2D) screening, optional twin pre-check, then `rounds`
/// independent rounds with freshly sampled bases.
TestOutcome strong_lucas_test(const BigInt& n, const BigInt& D, Rng& rng,
                              const StrongLucasOptions& options = {});

/// Independent verification of a Composite outcome's witness.
bool verify_witness(const BigInt& n, const BigInt& D, const TestOutcome& outcome);

}  // namespace lucas
