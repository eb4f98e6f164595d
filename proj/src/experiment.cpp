#include "lucas/experiment.hpp"

#include <cmath>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "lucas/lucas_engine.hpp"
#include "lucas/sl_census.hpp"

namespace lucas {

namespace {

Rational rpow(const Rational& x, unsigned t) {
    Rational out = 1;
    for (unsigned i = 0; i < t; ++i) out *= x;
    return out;
}

std::vector<u64> first_odd_primes(unsigned l) {
    std::vector<u64> out;
    out.reserve(l);
    for (unsigned i = 1; i <= l; ++i) out.push_back(nth_odd_prime(i));
    return out;
}

bool has_small_factor(u64 n, const std::vector<u64>& primes) {
    for (u64 p : primes)
        if (n % p == 0) return true;
    return false;
}

bool has_small_factor(const BigInt& n, const std::vector<u64>& primes) {
    for (u64 p : primes)
        if (boost::multiprecision::integer_modulus(n, p) == 0) return true;
    return false;
}

bool is_square(const BigInt& D) {
    if (D < 0) return false;
    const BigInt r = isqrt_newton(D);
    return r * r == D;
}

// Per-n base counts, each from the census or from enumerating P.
struct BaseCounts {
    BigInt sl;
    BigInt alpha_bar_den;
    BigInt admissible;
    BigInt generator_den;
};

BaseCounts closed_form_counts(u64 n, const BigInt& D, const Factorization& f) {
    const EpsDecomp decomp = epsilon_decompose(BigInt(n), D, f);
    BaseCounts c;
    c.sl = sl_count(decomp);
    c.alpha_bar_den = BigInt(n) - decomp.eps_n - 1;
    c.admissible = admissible_pairs(decomp);
    BigInt roots = 1;
    for (const auto& ps : decomp.primes) roots *= 1 + ps.eps;
    c.generator_den = BigInt(n) - roots;
    return c;
}

BaseCounts enumerated_counts(u64 n, i64 D) {
    const u64 d = mod_floor(D, n);
    u64 sl = 0, admissible = 0, not_resampled = 0;
    for (u64 p = 0; p < n; ++p) {
        const auto draw = make_base<u64>(n, d, p);
        if (draw.kind == BaseDraw<u64>::Kind::Rejected) continue;
        ++not_resampled;
        if (draw.kind != BaseDraw<u64>::Kind::Accepted) continue;
        ++admissible;
        if (strong_lucas_holds(draw.base)) ++sl;
    }
    BaseCounts c;
    c.sl = sl;
    c.alpha_bar_den = BigInt(n) - jacobi(D, n) - 1;
    c.admissible = admissible;
    c.generator_den = not_resampled;
    return c;
}

}  // namespace

void validate(const GenConfig& config) {
    if (config.k < 4) throw std::invalid_argument("GenConfig: k must be at least 4");
    if (config.t < 1) throw std::invalid_argument("GenConfig: t must be at least 1");
    if (is_square(config.D)) throw std::invalid_argument("GenConfig: D must not be a perfect square");
}

RunRecord generate_probable_prime(const GenConfig& config) {
    validate(config);
    Rng rng(config.seed);
    const auto small_primes = first_odd_primes(config.l);
    const BigInt half_range = BigInt(1) << (config.k - 2);
    const BigInt low = BigInt(1) << (config.k - 1);
    const BigInt two_d = 2 * config.D;

    RunRecord rec;
    rec.config = config;
    StrongLucasOptions options;
    options.rounds = config.t;
    while (rec.candidates_tested < config.candidate_budget) {
        ++rec.candidates_tested;
        const BigInt n = low + 2 * uniform_below(half_range, rng) + 1;
        if (has_small_factor(n, small_primes)) {
            ++rec.rejected_trial_division;
            continue;
        }
        if (gcd(n, two_d) != 1) {
            ++rec.rejected_gcd;
            continue;
        }
        // Any p (p + 2) is composite, whether or not its factors are prime.
        if (config.twin_precheck && twin_product_precheck(n)) {
            ++rec.rejected_twin;
            continue;
        }
        const TestOutcome outcome = strong_lucas_test(n, config.D, rng, options);
        rec.rounds_per_candidate.push_back(outcome.rounds);
        if (outcome.probable_prime()) {
            rec.output = n;
            rec.output_is_composite = !is_prime_oracle(n);
            return rec;
        }
    }
    throw BudgetExceeded("generate_probable_prime: no output within " +
                         std::to_string(config.candidate_budget) + " candidates");
}

ExactResult exact_qkt_small(const ExactQuery& query) {
    const unsigned k = query.k;
    const bool enumerate = query.method == ExactMethod::BaseEnumeration;
    if (k < 3) throw std::invalid_argument("exact_qkt_small: k must be at least 3");
    if (query.t < 1) throw std::invalid_argument("exact_qkt_small: t must be at least 1");
    if (k > (enumerate ? kMaxBruteForceBits : kMaxExactBits))
        throw BudgetExceeded("exact_qkt_small: k = " + std::to_string(k) + " exceeds the sweep budget");
    if (is_square(query.D)) throw std::invalid_argument("exact_qkt_small: D must not be a perfect square");
    if (enumerate && (query.D > INT64_MAX || query.D < INT64_MIN))
        throw std::invalid_argument("exact_qkt_small: D out of range for base enumeration");

    const auto small_primes = first_odd_primes(query.l);
    const BigInt two_d = 2 * query.D;
    ExactResult r;
    r.query = query;
    const u64 lo = u64{1} << (k - 1);
    const u64 hi = u64{1} << k;
    for (u64 n = lo + 1; n < hi; n += 2) {
        if (has_small_factor(n, small_primes)) continue;
        ++r.candidates;
        const Factorization f = factorize(n);
        const bool prime = f.total() == 1;
        if (!prime) ++r.composites;
        if (gcd(BigInt(n), two_d) != 1) continue;

        const BaseCounts c = enumerate ? enumerated_counts(n, query.D.convert_to<i64>())
                                       : closed_form_counts(n, query.D, f);
        if (prime) {
            ++r.primes;
            r.prime_alpha_bar_sum += rpow(Rational(c.admissible, c.alpha_bar_den), query.t);
        } else {
            r.alpha_bar_sum += rpow(Rational(c.sl, c.alpha_bar_den), query.t);
            r.admissible_sum += rpow(Rational(c.sl, c.admissible), query.t);
            r.generator_sum += rpow(Rational(c.sl, c.generator_den), query.t);
        }
    }
    const Rational primes(BigInt(r.primes));
    const auto ratio = [&](const Rational& s) { return s == 0 ? Rational(0) : Rational(s / (s + primes)); };
    r.q = ratio(r.alpha_bar_sum);
    r.q_admissible = ratio(r.admissible_sum);
    r.q_generator = ratio(r.generator_sum);
    return r;
}

Rational enumerate_alpha_bar_sum(unsigned k, unsigned t, const BigInt& D, unsigned l, ExactMethod method) {
    return exact_qkt_small({k, t, D, l, method}).alpha_bar_sum;
}

McSummary monte_carlo_qkt(const GenConfig& config, u64 trials, unsigned threads,
                          std::vector<RunRecord>* records) {
    validate(config);
    if (trials < 1) throw std::invalid_argument("monte_carlo_qkt: trials must be at least 1");
    threads = std::max(1U, threads);

    std::vector<char> composite(trials, 0);
    if (records) records->assign(trials, RunRecord{});
    std::vector<std::exception_ptr> errors(threads);
    const auto worker = [&](unsigned id) {
        try {
            for (u64 i = id; i < trials; i += threads) {
                GenConfig c = config;
                c.seed = derive_seed(config.seed, i);
                RunRecord rec = generate_probable_prime(c);
                composite[i] = rec.output_is_composite;
                if (records) (*records)[i] = std::move(rec);
            }
        } catch (...) {
            errors[id] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    McSummary s;
    s.config = config;
    s.trials = trials;
    for (char c : composite) s.composites += c;
    s.estimate = static_cast<double>(s.composites) / static_cast<double>(trials);
    s.se = std::sqrt(s.estimate * (1 - s.estimate) / static_cast<double>(trials));
    return s;
}

std::string mc_csv_header() { return "k,t,l,D,trials,composites,estimate,se,exact_value_if_available"; }

std::string mc_csv_row(const McSummary& s) {
    std::ostringstream out;
    out << std::setprecision(12);
    out << s.config.k << ',' << s.config.t << ',' << s.config.l << ',' << s.config.D << ',' << s.trials
        << ',' << s.composites << ',' << s.estimate << ',' << s.se << ',';
    if (s.exact) out << s.exact->convert_to<double>();
    return out.str();
}

}  // namespace lucas
