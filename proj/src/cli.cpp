#include "lucas/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <random>

#include "CLI11.hpp"

#include "lucas/json_io.hpp"

namespace lucas {

namespace {

std::string approx(const Rational& x) {
    if (boost::multiprecision::denominator(x) == 1) return to_string(x);
    return to_string(x) + " (≈ " + Real(x).str(8) + ")";
}

std::string sign(int e) { return e > 0 ? "+1" : (e < 0 ? "-1" : "0"); }

// Integer flags that may exceed 64 bits are read as strings.
CLI::Option* add_bigint(CLI::App* app, const std::string& name, std::string& target, const std::string& help) {
    return app->add_option(name, target, help)->check([](const std::string& s) {
        try {
            parse_bigint(s);
            return std::string();
        } catch (const std::exception& e) {
            return std::string(e.what());
        }
    });
}

CLI::Option* add_format(CLI::App* app, std::string& target, std::vector<std::string> allowed) {
    return app->add_option("--format", target, "Output mode")
        ->check(CLI::IsMember(std::move(allowed)))
        ->capture_default_str();
}

u64 resolve_seed(const std::optional<u64>& given, bool& generated) {
    generated = !given;
    if (given) return *given;
    std::random_device rd;
    return (u64(rd()) << 32) ^ rd();
}

struct Options {
    // shared
    std::string n, d = "5", format;
    unsigned t = 1, l = 0, k = 0;
    std::optional<u64> seed;
    bool twin = false;
    // bounds
    int which = 1;
    std::string theorem;
    std::optional<unsigned> bound_l;
    // gen / experiment
    u64 budget = 10'000'000;
    u64 trials = 1000;
    unsigned threads = 1;
    std::string method = "closed_form";
    std::string out_path, records_path;
};

int cmd_test(const Options& o, std::ostream& out) {
    const BigInt n = parse_bigint(o.n);
    const BigInt D = parse_bigint(o.d);
    bool generated = false;
    const u64 seed = resolve_seed(o.seed, generated);
    Rng rng(seed);
    StrongLucasOptions opts;
    opts.rounds = o.t;
    opts.twin_precheck = o.twin;
    const TestOutcome outcome = strong_lucas_test(n, D, rng, opts);

    Json j = {{"n", n.str()}, {"D", D.str()}, {"t", o.t}, {"seed", seed}};
    j.update(Json(outcome));
    if (!outcome.probable_prime()) j["witness_verified"] = verify_witness(n, D, outcome);
    if (o.format == "json") {
        out << j.dump() << '\n';
        return kExitOk;
    }
    if (generated) out << "seed: " << seed << '\n';
    out << (outcome.probable_prime() ? "probable prime" : "composite") << '\n' << j.dump() << '\n';
    return kExitOk;
}

int cmd_census(const Options& o, std::ostream& out) {
    const BigInt n = parse_bigint(o.n);
    const BigInt D = parse_bigint(o.d);
    if (n < 3) throw std::invalid_argument("census: n must be at least 3");
    Json j = {{"n", n.str()}, {"D", D.str()}};
    if (low_bits(n, 1) == 0 || gcd(mod_floor(D, n), n) != 1) {
        j.update({{"sl", "0"}, {"phi_d", nullptr}, {"alpha", nullptr}, {"alpha_bar", nullptr},
                  {"decomposition", nullptr}, {"note", "gcd(n, 2D) > 1"}});
        if (o.format == "json")
            out << j.dump() << '\n';
        else
            out << "n = " << n << ", D = " << D << "\nsl = 0 (gcd(n, 2D) > 1)\n";
        return kExitOk;
    }
    const EpsDecomp decomp = epsilon_decompose(n, D);
    const AlphaReport rep = alpha_report(decomp);
    j.update(Json(rep));
    j["decomposition"] = decomp;
    if (o.format == "json") {
        out << j.dump() << '\n';
        return kExitOk;
    }
    out << "n = " << n << ", D = " << D << '\n'
        << "sl = " << rep.sl << '\n'
        << "phi_d = " << rep.phi_d << '\n'
        << "admissible = " << rep.admissible << '\n'
        << "alpha = " << approx(rep.alpha) << '\n'
        << "alpha_bar = " << approx(rep.alpha_bar) << '\n'
        << "alpha_bar_admissible = " << approx(rep.alpha_bar_admissible) << '\n'
        << "eps(n) = " << sign(decomp.eps_n) << ", n - eps(n) = 2^" << decomp.kappa << " * " << decomp.q << '\n';
    for (const auto& ps : decomp.primes)
        out << "  p = " << ps.p << "^" << ps.r << ", eps = " << sign(ps.eps) << ", p - eps = 2^" << ps.k << " * "
            << ps.q << '\n';
    return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
    const BigInt n = parse_bigint(o.n);
    const BigInt D = parse_bigint(o.d);
    if (n < 3) throw std::invalid_argument("classify: n must be at least 3");
    const C3Form form = classify_c3(n, D);
    Json j = {{"n", n.str()}, {"D", D.str()}};
    j.update(Json(form));
    const bool by_alpha = c_m_member(n, D, 3);
    j["alpha_exceeds_1/8"] = by_alpha;
    if (o.format == "json") {
        out << j.dump() << '\n';
        return kExitOk;
    }
    out << "n = " << n << ", D = " << D << '\n'
        << "in C3: " << (form.tag != C3Tag::NotInC3 ? "yes" : "no") << " (" << to_string(form.tag) << ")\n"
        << "alpha > 1/8: " << (by_alpha ? "yes" : "no") << '\n';
    if (!form.primes.empty()) {
        out << "primes:";
        for (std::size_t i = 0; i < form.primes.size(); ++i)
            out << ' ' << form.primes[i] << " (eps " << sign(form.eps_signs[i]) << ")";
        out << '\n';
    }
    if (form.k1) out << "k1 = " << *form.k1 << '\n';
    if (form.q1) out << "q1 = " << *form.q1 << '\n';
    if (form.excluded_shape) out << "excluded case of " << to_string(*form.excluded_shape) << '\n';
    return kExitOk;
}

int cmd_bounds_table(const Options& o, std::ostream& out) {
    out << to_csv(emit_table(o.which));
    return kExitOk;
}

int cmd_bounds_eval(const Options& o, std::ostream& out) {
    BoundQuery q;
    q.k = o.k;
    q.t = o.t;
    q.l = o.bound_l.value_or(calc_trial_divisions(o.k));
    if (q.k < 2) throw std::invalid_argument("bounds eval: k must be at least 2");
    const BoundReport r = evaluate_bound(o.theorem, q);
    if (o.format == "json") {
        out << Json(r).dump() << '\n';
        return kExitOk;
    }
    out << r.theorem << " at k = " << q.k << ", t = " << q.t << ", l = " << q.l << '\n'
        << "value = " << real_string(r.value, 12) << '\n'
        << "-log2 = " << real_string(r.neg_log2_exact, 12) << " (floor " << r.neg_log2 << ")\n"
        << "hypotheses met: " << (r.hypotheses_met ? "yes" : "no") << '\n';
    if (r.near_integer_boundary) out << "warning: within 1e-6 of an integer boundary\n";
    return kExitOk;
}

GenConfig gen_config(const Options& o, u64 seed) {
    GenConfig c;
    c.k = o.k;
    c.t = o.t;
    c.l = o.l;
    c.D = parse_bigint(o.d);
    c.seed = seed;
    c.twin_precheck = o.twin;
    c.candidate_budget = o.budget;
    return c;
}

int cmd_gen(const Options& o, std::ostream& out) {
    bool generated = false;
    const u64 seed = resolve_seed(o.seed, generated);
    const RunRecord rec = generate_probable_prime(gen_config(o, seed));
    if (o.format == "json") {
        out << Json(rec).dump() << '\n';
        return kExitOk;
    }
    if (generated) out << "seed: " << seed << '\n';
    out << "output = " << rec.output << '\n'
        << "composite = " << (rec.output_is_composite ? "true" : "false") << '\n'
        << "candidates = " << rec.candidates_tested << " (trial division " << rec.rejected_trial_division
        << ", gcd " << rec.rejected_gcd << ", twin " << rec.rejected_twin << ", lucas "
        << rec.rounds_per_candidate.size() << ")\n";
    return kExitOk;
}

int cmd_exact(const Options& o, std::ostream& out) {
    ExactQuery q;
    q.k = o.k;
    q.t = o.t;
    q.l = o.l;
    q.D = parse_bigint(o.d);
    q.method = o.method == "closed_form" ? ExactMethod::ClosedForm : ExactMethod::BaseEnumeration;
    const ExactResult r = exact_qkt_small(q);
    if (o.format == "json") {
        out << Json(r).dump() << '\n';
        return kExitOk;
    }
    out << "k = " << q.k << ", t = " << q.t << ", l = " << q.l << ", D = " << q.D << '\n'
        << "candidates = " << r.candidates << ", composites = " << r.composites << ", primes = " << r.primes << '\n'
        << "alpha_bar_sum = " << approx(r.alpha_bar_sum) << '\n'
        << "q = " << approx(r.q) << '\n'
        << "q_admissible = " << approx(r.q_admissible) << '\n'
        << "q_generator = " << approx(r.q_generator) << '\n';
    return kExitOk;
}

// Exact values accompany Monte Carlo summaries up to this size.
constexpr unsigned kMcExactBits = 16;

int cmd_mc(const Options& o, std::ostream& out) {
    bool generated = false;
    const u64 seed = resolve_seed(o.seed, generated);
    const GenConfig config = gen_config(o, seed);
    std::vector<RunRecord> records;
    McSummary s = monte_carlo_qkt(config, o.trials, o.threads, o.records_path.empty() ? nullptr : &records);
    if (config.k <= kMcExactBits && !config.twin_precheck)
        s.exact = exact_qkt_small({config.k, config.t, config.D, config.l, ExactMethod::ClosedForm}).q_generator;

    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        if (!f) throw std::invalid_argument("cannot write " + o.out_path);
        f << mc_csv_header() << '\n' << mc_csv_row(s) << '\n';
    }
    if (!o.records_path.empty()) {
        std::ofstream f(o.records_path);
        if (!f) throw std::invalid_argument("cannot write " + o.records_path);
        for (const auto& r : records) f << Json(r).dump() << '\n';
    }
    if (o.format == "json") {
        out << Json(s).dump() << '\n';
    } else if (o.format == "csv") {
        out << mc_csv_header() << '\n' << mc_csv_row(s) << '\n';
    } else {
        if (generated) out << "seed: " << seed << '\n';
        out << "trials = " << s.trials << ", composites = " << s.composites << '\n'
            << "estimate = " << s.estimate << " +- " << s.se << '\n';
        if (s.exact) out << "exact = " << approx(*s.exact) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strong Lucas probable-prime test, liar census and error bounds", "lucas"};
    app.require_subcommand(1);
    Options o;
    std::function<int()> action;
    const auto bind = [&](CLI::App* sub, int (*fn)(const Options&, std::ostream&)) {
        sub->callback([&, fn] { action = [&, fn] { return fn(o, out); }; });
    };

    auto* test = app.add_subcommand("test", "Run the strong Lucas test on n");
    add_bigint(test, "--n", o.n, "Odd integer to test")->required();
    add_bigint(test, "--d", o.d, "Discriminant D")->capture_default_str();
    test->add_option("--t", o.t, "Rounds")->check(CLI::PositiveNumber)->capture_default_str();
    test->add_option("--seed", o.seed, "Random seed (printed when omitted)");
    test->add_flag("--twin-precheck", o.twin, "Reject n = p (p + 2) first");
    o.format = "human";
    add_format(test, o.format, {"human", "json"});
    bind(test, cmd_test);

    auto* census = app.add_subcommand("census", "Exact liar count SL(D, n) and derived ratios");
    add_bigint(census, "--n", o.n, "Odd integer")->required();
    add_bigint(census, "--d", o.d, "Discriminant D")->capture_default_str();
    add_format(census, o.format, {"human", "json"});
    bind(census, cmd_census);

    auto* classify = app.add_subcommand("classify", "Structural membership in C_{3,D}");
    add_bigint(classify, "--n", o.n, "Odd integer")->required();
    add_bigint(classify, "--d", o.d, "Discriminant D")->capture_default_str();
    add_format(classify, o.format, {"human", "json"});
    bind(classify, cmd_classify);

    auto* bounds = app.add_subcommand("bounds", "Error-bound evaluators and tables");
    bounds->require_subcommand(1);
    auto* table = bounds->add_subcommand("table", "Emit one of the four bound tables as CSV");
    table->add_option("--which", o.which, "Table number")->required()->check(CLI::Range(1, 4));
    bind(table, cmd_bounds_table);
    auto* eval = bounds->add_subcommand("eval", "Evaluate one bound");
    eval->add_option("--k", o.k, "Bit length")->required();
    eval->add_option("--t", o.t, "Rounds")->check(CLI::PositiveNumber)->capture_default_str();
    eval->add_option("--l", o.bound_l, "Trial-division depth (default: the k-dependent schedule)");
    eval->add_option("--theorem", o.theorem, "Bound name")
        ->required()
        ->check(CLI::IsMember({"q_k1", "q_kt", "q_kl1", "q_kl1_127", "q_klt", "q_klt_large_t", "p_kt"}));
    std::string eval_format = "json";
    add_format(eval, eval_format, {"human", "json"});
    eval->callback([&] {
        o.format = eval_format;
        action = [&] { return cmd_bounds_eval(o, out); };
    });

    auto* gen = app.add_subcommand("gen", "Generate a k-bit probable prime");
    gen->add_option("--k", o.k, "Bit length")->required();
    gen->add_option("--t", o.t, "Rounds")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--l", o.l, "Trial-division depth")->capture_default_str();
    add_bigint(gen, "--d", o.d, "Discriminant D")->capture_default_str();
    gen->add_option("--seed", o.seed, "Random seed (printed when omitted)");
    gen->add_flag("--twin-precheck", o.twin, "Discard n = p (p + 2)");
    gen->add_option("--budget", o.budget, "Candidate budget")->capture_default_str();
    add_format(gen, o.format, {"human", "json"});
    bind(gen, cmd_gen);

    auto* experiment = app.add_subcommand("experiment", "Exact and Monte Carlo average-case error");
    experiment->require_subcommand(1);
    auto* exact = experiment->add_subcommand("exact", "Exhaustive q_{k,t} for small k");
    exact->add_option("--k", o.k, "Bit length")->required();
    exact->add_option("--t", o.t, "Rounds")->check(CLI::PositiveNumber)->capture_default_str();
    exact->add_option("--l", o.l, "Trial-division depth")->capture_default_str();
    add_bigint(exact, "--d", o.d, "Discriminant D")->capture_default_str();
    exact->add_option("--method", o.method, "Liar-count source")
        ->check(CLI::IsMember({"closed_form", "base_enumeration"}))
        ->capture_default_str();
    add_format(exact, o.format, {"human", "json"});
    bind(exact, cmd_exact);
    auto* mc = experiment->add_subcommand("mc", "Monte Carlo estimate of q_{k,t}");
    mc->add_option("--k", o.k, "Bit length")->required();
    mc->add_option("--t", o.t, "Rounds")->check(CLI::PositiveNumber)->capture_default_str();
    mc->add_option("--l", o.l, "Trial-division depth")->capture_default_str();
    add_bigint(mc, "--d", o.d, "Discriminant D")->capture_default_str();
    mc->add_option("--trials", o.trials, "Number of generations")->check(CLI::PositiveNumber)->capture_default_str();
    mc->add_option("--seed", o.seed, "Random seed (printed when omitted)");
    mc->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    mc->add_flag("--twin-precheck", o.twin, "Discard n = p (p + 2)");
    mc->add_option("--budget", o.budget, "Candidate budget per generation")->capture_default_str();
    mc->add_option("--out", o.out_path, "Summary CSV path");
    mc->add_option("--records", o.records_path, "JSON-lines path for every RunRecord");
    add_format(mc, o.format, {"human", "json", "csv"});
    bind(mc, cmd_mc);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return action ? action() : kExitUsage;
    } catch (const HypothesisGate& e) {
        err << "hypothesis gate: " << e.what() << '\n';
        return kExitGate;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kExitGate;
    } catch (const FactorizationError& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kExitGate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace lucas
