#include "lucas/worst_case.hpp"

#include <algorithm>

namespace lucas {

namespace {

bool alpha_exceeds(const BigInt& sl, const BigInt& phi, unsigned m) {
    return (sl << m) > phi;
}

Rational pow2_inverse(unsigned e) { return Rational(BigInt(1), BigInt(1) << e); }

// alpha_D(p^2) for p in {3, 5, 7}, by the sign of (D/p).
Rational square_alpha(unsigned p, int eps) {
    switch (p) {
        case 3: return eps == 1 ? Rational(1, 6) : Rational(1, 4);
        case 5: return eps == 1 ? Rational(3, 20) : Rational(1, 6);
        default: return eps == 1 ? Rational(5, 42) : Rational(1, 8);
    }
}

}  // namespace

bool c_m_member(const BigInt& n, const BigInt& D, unsigned m, const FactorConfig& config) {
    if (n < 9 || low_bits(n, 1) == 0) return false;
    if (gcd(mod_floor(D, n), n) != 1) return false;
    const Factorization f = factorize(n, config);
    if (f.total() < 2) return false;
    const EpsDecomp decomp = epsilon_decompose(n, D, f);
    return alpha_exceeds(sl_count(decomp), phi_D(decomp), m);
}

std::string_view to_string(C3Tag tag) {
    switch (tag) {
        case C3Tag::SquareOfSmallPrime: return "SquareOfSmallPrime";
        case C3Tag::TwinPair: return "TwinPair";
        case C3Tag::TripleShift: return "TripleShift";
        case C3Tag::DoubleShift: return "DoubleShift";
        case C3Tag::TripleLucasCarmichael: return "TripleLucasCarmichael";
        case C3Tag::NotInC3: return "NotInC3";
    }
    return "NotInC3";
}

C3Form classify_c3(const BigInt& n, const BigInt& D, const FactorConfig& config) {
    C3Form form;
    if (n < 9 || low_bits(n, 1) == 0 || gcd(mod_floor(D, n), n) != 1) return form;
    const Factorization f = factorize(n, config);
    if (f.total() < 2) return form;
    for (const auto& e : f.entries) {
        if (!is_prime_oracle(e.prime)) return form;
        form.primes.push_back(e.prime);
        form.eps_signs.push_back(jacobi(D, e.prime));
    }

    const auto set_base = [&](const BigInt& x) {
        auto split = two_adic_split(x);
        form.k1 = split.kappa;
        form.q1 = std::move(split.q);
    };
    // Members are the shapes whose closed-form alpha exceeds 1/8.
    const auto decide = [&](C3Tag shape, Rational alpha) {
        form.form_alpha = alpha;
        if (alpha > Rational(1, 8))
            form.tag = shape;
        else
            form.excluded_shape = shape;
    };

    if (f.distinct() == 1) {
        const auto& [p, r] = f.entries.front();
        const int eps = form.eps_signs.front();
        if (r == 2 && (p == 3 || p == 5 || p == 7)) {
            set_base(BigInt(p - eps));
            decide(C3Tag::SquareOfSmallPrime, square_alpha(p.convert_to<unsigned>(), eps));
        }
        return form;
    }

    if (f.distinct() == 2 && f.total() == 2) {
        BigInt x0 = form.primes[0] - form.eps_signs[0];
        BigInt x1 = form.primes[1] - form.eps_signs[1];
        if (x0 > x1) std::swap(x0, x1);
        set_base(x0);
        const unsigned k1 = *form.k1;
        const Rational r = Rational(BigInt(*form.q1 - 1), *form.q1);
        const Rational four_k = Rational(BigInt(1) << (2 * k1));
        if (x0 == x1) {
            decide(C3Tag::TwinPair, (r * r + (four_k - 1) / 3) / four_k);
        } else if (x1 == 3 * x0) {
            decide(C3Tag::TripleShift, (r * r / 3 + (four_k - 1) / 9) / four_k);
        } else if (x1 == 2 * x0) {
            decide(C3Tag::DoubleShift, r * r / (2 * four_k) + (four_k - 1) / (6 * four_k));
        } else {
            form.k1.reset();
            form.q1.reset();
        }
        return form;
    }

    if (f.distinct() == 3 && f.total() == 3) {
        const int eps_n = jacobi(D, n);
        const BigInt m = n - eps_n;
        std::optional<unsigned> common_k;
        bool ok = true;
        for (std::size_t i = 0; i < 3 && ok; ++i) {
            const BigInt x = form.primes[i] - form.eps_signs[i];
            const unsigned k = two_adic_split(x).kappa;
            if (common_k && *common_k != k) ok = false;
            common_k = k;
            if (m % x != 0) ok = false;
        }
        if (ok) {
            form.tag = C3Tag::TripleLucasCarmichael;
            form.k1 = common_k;
        }
        return form;
    }
    return form;
}

Rational alpha_exact_formula(const EpsDecomp& decomp) {
    unsigned k_sum = 0;
    Rational prime_powers = 1;
    Rational prod_minus = 1;
    Rational prod_gcd = 1;
    for (const auto& ps : decomp.primes) {
        k_sum += ps.k;
        prime_powers /= Rational(boost::multiprecision::pow(ps.p, ps.r - 1));
        const BigInt g = gcd(decomp.q, ps.q);
        prod_minus *= Rational(BigInt(g - 1), ps.q);
        prod_gcd *= Rational(g, ps.q);
    }
    const unsigned s = static_cast<unsigned>(decomp.s());
    const Rational geometric(BigInt((BigInt(1) << (s * decomp.k1())) - 1), BigInt((BigInt(1) << s) - 1));
    return pow2_inverse(k_sum) * prime_powers * (prod_minus + geometric * prod_gcd);
}

Rational twin_alpha(unsigned k1) {
    if (k1 == 0) throw std::invalid_argument("twin_alpha: k1 must be positive");
    return Rational(1, 3) - Rational(BigInt(1), BigInt(3) * (BigInt(1) << (2 * k1)));
}

bool density_hypothesis(unsigned k, unsigned m) {
    if (k < 1) return false;
    // m + 1 <= 2 sqrt(k - 1)  <=>  (m + 1)^2 <= 4 (k - 1)
    return u64(m + 1) * (m + 1) <= 4 * u64(k - 1);
}

Real density_bound(unsigned k, unsigned m) {
    Real sum = 0;
    for (unsigned j = 2; j <= m; ++j) {
        const Real exponent = Real(int(m) - int(j)) - Real(k - 1) / j;
        sum += boost::multiprecision::pow(Real(2), exponent);
    }
    return 8 * sum;
}

std::vector<DensityCheck> frac_cm_empirical_all(unsigned k, const BigInt& D) {
    if (k > kMaxDensityBits)
        throw BudgetExceeded("frac_cm_empirical: k = " + std::to_string(k) + " exceeds the sweep budget");
    if (k < 3) throw HypothesisGate("frac_cm_empirical: k must be at least 3");
    unsigned m_max = 0;
    while (density_hypothesis(k, m_max + 1)) ++m_max;
    if (m_max == 0) throw HypothesisGate("frac_cm_empirical: no m satisfies m + 1 <= 2 sqrt(k - 1)");

    // members[m] counts n with alpha > 2^-m; alpha > 2^-m is monotone in m.
    std::vector<u64> members(m_max + 1, 0);
    const u64 lo = u64{1} << (k - 1);
    const u64 hi = u64{1} << k;
    for (u64 n = lo + 1; n < hi; n += 2) {
        if (gcd(mod_floor(D, BigInt(n)).convert_to<u64>(), n) != 1) continue;
        const Factorization f = factorize(n);
        if (f.total() < 2) continue;
        const EpsDecomp decomp = epsilon_decompose(BigInt(n), D, f);
        const BigInt sl = sl_count(decomp);
        const BigInt phi = phi_D(decomp);
        for (unsigned m = 1; m <= m_max; ++m)
            if (alpha_exceeds(sl, phi, m)) ++members[m];
    }

    std::vector<DensityCheck> out;
    const u64 total = u64{1} << (k - 2);
    for (unsigned m = 1; m <= m_max; ++m) {
        DensityCheck c;
        c.k = k;
        c.m = m;
        c.members = members[m];
        c.total = total;
        c.observed = Rational(BigInt(members[m]), BigInt(total));
        c.bound = density_bound(k, m);
        c.holds = Real(c.observed) <= c.bound;
        out.push_back(std::move(c));
    }
    return out;
}

DensityCheck frac_cm_empirical(unsigned k, unsigned m, const BigInt& D) {
    if (!density_hypothesis(k, m))
        throw HypothesisGate("frac_cm_empirical: m + 1 > 2 sqrt(k - 1) for k = " + std::to_string(k) +
                             ", m = " + std::to_string(m));
    auto all = frac_cm_empirical_all(k, D);
    return all.at(m - 1);
}

}  // namespace lucas
