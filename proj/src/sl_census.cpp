#include "lucas/sl_census.hpp"

#include <algorithm>

#include "lucas/lucas_engine.hpp"

namespace lucas {

namespace {

bool coprime_to_2d(const BigInt& n, const BigInt& D) {
    return low_bits(n, 1) == 1 && gcd(mod_floor(D, n), n) == 1;
}

Rational ratio(const BigInt& num, const BigInt& den) { return Rational(num, den); }

}  // namespace

unsigned EpsDecomp::big_omega() const {
    unsigned total = 0;
    for (const auto& p : primes) total += p.r;
    return total;
}

EpsDecomp epsilon_decompose(const BigInt& n, const BigInt& D, const Factorization& factorization) {
    if (n < 3 || low_bits(n, 1) == 0)
        throw std::invalid_argument("epsilon_decompose: n must be odd and >= 3");
    if (!coprime_to_2d(n, D))
        throw std::invalid_argument("epsilon_decompose: gcd(n, 2D) > 1 for n = " + n.str());
    if (factorization.value() != n)
        throw std::invalid_argument("epsilon_decompose: factorization does not match n");

    EpsDecomp out;
    out.n = n;
    out.D = D;
    out.eps_n = jacobi(D, n);
    auto split = two_adic_split(BigInt(n - out.eps_n));
    out.kappa = split.kappa;
    out.q = std::move(split.q);
    for (const auto& [p, r] : factorization.entries) {
        PrimeSplit ps;
        ps.p = p;
        ps.r = r;
        ps.eps = jacobi(D, p);
        auto s = two_adic_split(BigInt(p - ps.eps));
        ps.k = s.kappa;
        ps.q = std::move(s.q);
        out.primes.push_back(std::move(ps));
    }
    std::stable_sort(out.primes.begin(), out.primes.end(),
                     [](const PrimeSplit& a, const PrimeSplit& b) { return a.k < b.k; });
    return out;
}

EpsDecomp epsilon_decompose(const BigInt& n, const BigInt& D, const FactorConfig& config) {
    return epsilon_decompose(n, D, factorize(n, config));
}

BigInt sl_count(const EpsDecomp& decomp) {
    BigInt prod_minus = 1;
    BigInt prod_gcd = 1;
    for (const auto& ps : decomp.primes) {
        const BigInt g = gcd(decomp.q, ps.q);
        prod_minus *= g - 1;
        prod_gcd *= g;
    }
    // sum_{j=0}^{k1-1} 2^{js} = (2^{s k1} - 1) / (2^s - 1)
    const unsigned s = static_cast<unsigned>(decomp.s());
    const BigInt geometric = ((BigInt(1) << (s * decomp.k1())) - 1) / ((BigInt(1) << s) - 1);
    return prod_minus + geometric * prod_gcd;
}

BigInt sl_count(const BigInt& n, const BigInt& D, const FactorConfig& config) {
    if (n < 3 || !coprime_to_2d(n, D)) return 0;
    return sl_count(epsilon_decompose(n, D, config));
}

BigInt phi_D(const EpsDecomp& decomp) {
    BigInt phi = 1;
    for (const auto& ps : decomp.primes)
        phi *= boost::multiprecision::pow(ps.p, ps.r - 1) * (ps.p - ps.eps);
    return phi;
}

BigInt phi_D(const BigInt& n, const BigInt& D, const FactorConfig& config) {
    return phi_D(epsilon_decompose(n, D, config));
}

BigInt admissible_pairs(const EpsDecomp& decomp) {
    BigInt count = 1;
    for (const auto& ps : decomp.primes)
        count *= boost::multiprecision::pow(ps.p, ps.r - 1) * (ps.p - 1 - ps.eps);
    return count;
}

AlphaReport alpha_report(const EpsDecomp& decomp) {
    AlphaReport rep;
    rep.sl = sl_count(decomp);
    rep.phi_d = phi_D(decomp);
    rep.admissible = admissible_pairs(decomp);
    rep.alpha = ratio(rep.sl, rep.phi_d);
    rep.alpha_bar = ratio(rep.sl, decomp.n - decomp.eps_n - 1);
    rep.alpha_bar_admissible = rep.admissible == 0 ? Rational(0) : ratio(rep.sl, rep.admissible);
    return rep;
}

AlphaReport alpha_report(const BigInt& n, const BigInt& D, const FactorConfig& config) {
    return alpha_report(epsilon_decompose(n, D, config));
}

u64 brute_force_sl(u64 n, i64 D, u64 budget) {
    if (n > budget)
        throw BudgetExceeded("brute_force_sl: n = " + std::to_string(n) + " exceeds budget " +
                             std::to_string(budget));
    if (n < 3 || (n & 1U) == 0) return 0;
    const u64 d = mod_floor(D, n);
    if (gcd(d, n) != 1) return 0;
    u64 count = 0;
    for (u64 p = 0; p < n; ++p) {
        const auto draw = make_base<u64>(n, d, p);
        if (draw.kind != BaseDraw<u64>::Kind::Accepted) continue;
        if (strong_lucas_holds(draw.base)) ++count;
    }
    return count;
}

AlphaUpperBounds alpha_upper_bounds(const EpsDecomp& decomp) {
    const BigInt m = decomp.n - decomp.eps_n;
    Rational gcd_ratio = 1;
    Rational prime_powers = 1;
    for (const auto& ps : decomp.primes) {
        const BigInt x = ps.p - ps.eps;
        gcd_ratio *= ratio(gcd(x, m), x);
        prime_powers /= Rational(boost::multiprecision::pow(ps.p, ps.r - 1));
    }
    const auto pow2 = [](int e) {
        return e >= 0 ? Rational(BigInt(1) << e) : Rational(BigInt(1), BigInt(1) << -e);
    };
    const int s = static_cast<int>(decomp.s());
    const int omega = static_cast<int>(decomp.big_omega());
    AlphaUpperBounds b;
    b.per_prime = pow2(1 - s) * prime_powers * gcd_ratio;
    b.omega_gcd = pow2(1 - omega) * gcd_ratio;
    b.omega = pow2(1 - omega);
    return b;
}

bool kappa_equals_k1_predicted(const EpsDecomp& decomp) {
    unsigned count = 0;
    for (const auto& ps : decomp.primes)
        if (ps.r % 2 == 1 && ps.k == decomp.k1()) ++count;
    return count % 2 == 1;
}

InertProduct construct_inert_product(const BigInt& D, const std::vector<unsigned>& exponents,
                                     u64 start) {
    if (D >= 0) {
        const BigInt r = isqrt_newton(D);
        if (r * r == D)
            throw std::invalid_argument("construct_inert_product: D is a perfect square");
    }
    InertProduct out;
    out.n = 1;
    u64 candidate = std::max<u64>(start, 3) | 1U;
    for (unsigned e : exponents) {
        if (e == 0) throw std::invalid_argument("construct_inert_product: zero exponent");
        for (;; candidate += 2) {
            if (!is_prime_oracle(candidate)) continue;
            if (mod_floor(D, BigInt(candidate)) == 0) continue;
            if (jacobi(D, BigInt(candidate)) == -1) break;
        }
        out.factorization.entries.push_back({BigInt(candidate), e});
        out.n *= boost::multiprecision::pow(BigInt(candidate), e);
        candidate += 2;
    }
    return out;
}

}  // namespace lucas
