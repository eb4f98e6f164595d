#include "lucas/lucas_engine.hpp"

namespace lucas {

namespace {

TestOutcome composite(Witness w, unsigned rounds = 0) {
    return {Verdict::Composite, std::move(w), rounds};
}

}  // namespace

TestOutcome strong_lucas_round(const BigInt& n, const LucasBase<BigInt>& base) {
    if (n < 3 || low_bits(n, 1) == 0)
        throw std::invalid_argument("strong_lucas_round: n must be odd and >= 3");
    const BigInt g = gcd(base.d % n, n);
    if (g == n) throw std::invalid_argument("strong_lucas_round: n divides D");
    if (g != 1) return composite(FactorWitness{g});
    if (strong_lucas_holds(base)) return {Verdict::ProbablePrime, std::nullopt, 1};
    return composite(LucasWitness{base.p, base.q});
}

TestOutcome miller_rabin_round(const BigInt& n, const BigInt& a) {
    if (n < 3 || low_bits(n, 1) == 0)
        throw std::invalid_argument("miller_rabin_round: n must be odd and >= 3");
    const BigInt g = gcd(mod_floor(a, n), n);
    if (g != 1 && g != n) return composite(FactorWitness{g});
    const BigInt nm1 = n - 1;
    const auto split = two_adic_split(nm1);
    BigInt x = mod_pow(a, split.q, n);
    if (x == 1 || x == nm1) return {Verdict::ProbablePrime, std::nullopt, 1};
    for (unsigned i = 1; i < split.kappa; ++i) {
        x = mul_mod(x, x, n);
        if (x == nm1) return {Verdict::ProbablePrime, std::nullopt, 1};
    }
    return composite(MillerRabinWitness{a});
}

std::optional<std::pair<BigInt, BigInt>> twin_product_precheck(const BigInt& n) {
    const BigInt m = n + 1;
    const BigInt r = isqrt_newton(m);
    if (r * r != m || r < 4) return std::nullopt;
    return std::make_pair(BigInt(r - 1), BigInt(r + 1));
}

TestOutcome strong_lucas_test(const BigInt& n, const BigInt& D, Rng& rng,
                              const StrongLucasOptions& options) {
    if (n < 3) throw std::invalid_argument("strong_lucas_test: n must be >= 3");
    if (low_bits(n, 1) == 0) return composite(FactorWitness{2});
    const BigInt d = mod_floor(D, n);
    const BigInt g = gcd(d, n);
    if (g == n) throw std::invalid_argument("strong_lucas_test: n divides D");
    if (g != 1) return composite(FactorWitness{g});
    if (options.twin_precheck && n >= 9) {
        if (auto twin = twin_product_precheck(n))
            return composite(TwinWitness{std::move(twin->first), std::move(twin->second)});
    }
    for (unsigned round = 0; round < options.rounds; ++round) {
        unsigned rejected = 0;
        for (;;) {
            auto draw = sample_base(n, d, rng);
            if (draw.kind == BaseDraw<BigInt>::Kind::Factor)
                return composite(FactorWitness{std::move(draw.factor)}, round);
            if (draw.kind == BaseDraw<BigInt>::Kind::Accepted) {
                if (!strong_lucas_holds(draw.base))
                    return composite(LucasWitness{draw.base.p, draw.base.q}, round);
                break;
            }
            if (++rejected >= options.max_rejections)
                throw BudgetExceeded("strong_lucas_test: no admissible base found for n = " + n.str());
        }
    }
    return {Verdict::ProbablePrime, std::nullopt, options.rounds};
}

bool verify_witness(const BigInt& n, const BigInt& D, const TestOutcome& outcome) {
    if (outcome.verdict != Verdict::Composite || !outcome.witness) return false;
    return std::visit(
        [&](const auto& w) -> bool {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, FactorWitness>) {
                return w.factor > 1 && w.factor < n && n % w.factor == 0;
            } else if constexpr (std::is_same_v<W, TwinWitness>) {
                return w.lower > 1 && w.upper == w.lower + 2 && w.lower * w.upper == n;
            } else if constexpr (std::is_same_v<W, MillerRabinWitness>) {
                return miller_rabin_round(n, w.a).verdict == Verdict::Composite;
            } else {
                if (n < 3 || low_bits(n, 1) == 0) return false;
                const BigInt d = mod_floor(D, n);
                if (gcd(d, n) != 1 || gcd(w.q, n) != 1) return false;
                if (mod_floor(w.p * w.p - 4 * w.q - D, n) != 0) return false;
                return !strong_lucas_holds(LucasBase<BigInt>{mod_floor(w.p, n), mod_floor(w.q, n), d, n});
            }
        },
        *outcome.witness);
}

}  // namespace lucas
