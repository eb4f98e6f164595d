#include "lucas/json_io.hpp"

#include <regex>

namespace lucas {

BigInt parse_bigint(const std::string& text) {
    static const std::regex pattern("[+-]?[0-9]+");
    if (!std::regex_match(text, pattern)) throw std::invalid_argument("not an integer: '" + text + "'");
    return BigInt(text[0] == '+' ? text.substr(1) : text);
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_bigint(text));
    const BigInt den = parse_bigint(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
    return Rational(parse_bigint(text.substr(0, slash)), den);
}

std::string real_string(const Real& x, int digits) { return x.str(digits, std::ios_base::scientific); }

std::string_view to_string(Verdict v) {
    return v == Verdict::ProbablePrime ? "probable_prime" : "composite";
}

void to_json(Json& j, const TestOutcome& outcome) {
    j = Json::object();
    j["verdict"] = to_string(outcome.verdict);
    j["rounds"] = outcome.rounds;
    if (!outcome.witness) {
        j["witness"] = nullptr;
        return;
    }
    j["witness"] = std::visit(
        [](const auto& w) -> Json {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, LucasWitness>)
                return {{"type", "lucas"}, {"p", w.p.str()}, {"q", w.q.str()}};
            else if constexpr (std::is_same_v<W, MillerRabinWitness>)
                return {{"type", "miller_rabin"}, {"a", w.a.str()}};
            else if constexpr (std::is_same_v<W, FactorWitness>)
                return {{"type", "factor"}, {"factor", w.factor.str()}};
            else
                return {{"type", "twin"}, {"lower", w.lower.str()}, {"upper", w.upper.str()}};
        },
        *outcome.witness);
}

void to_json(Json& j, const EpsDecomp& d) {
    Json primes = Json::array();
    for (const auto& ps : d.primes)
        primes.push_back({{"p", ps.p.str()}, {"r", ps.r}, {"eps", ps.eps}, {"k", ps.k}, {"q", ps.q.str()}});
    j = {{"eps_n", d.eps_n}, {"kappa", d.kappa}, {"q", d.q.str()}, {"primes", std::move(primes)}};
}

void to_json(Json& j, const AlphaReport& r) {
    j = {{"sl", r.sl.str()},
         {"phi_d", r.phi_d.str()},
         {"admissible", r.admissible.str()},
         {"alpha", to_string(r.alpha)},
         {"alpha_bar", to_string(r.alpha_bar)},
         {"alpha_bar_admissible", to_string(r.alpha_bar_admissible)}};
}

void to_json(Json& j, const C3Form& f) {
    Json primes = Json::array();
    for (const auto& p : f.primes) primes.push_back(p.str());
    Json params = {{"primes", std::move(primes)}, {"eps", f.eps_signs}};
    params["k1"] = f.k1 ? Json(*f.k1) : Json(nullptr);
    params["q1"] = f.q1 ? Json(f.q1->str()) : Json(nullptr);
    params["excluded_shape"] = f.excluded_shape ? Json(std::string(to_string(*f.excluded_shape))) : Json(nullptr);
    params["form_alpha"] = f.form_alpha ? Json(to_string(*f.form_alpha)) : Json(nullptr);
    j = {{"in_c3", f.tag != C3Tag::NotInC3}, {"form", std::string(to_string(f.tag))}, {"params", std::move(params)}};
}

void to_json(Json& j, const BoundReport& r) {
    j = {{"theorem", r.theorem},
         {"k", r.query.k},
         {"t", r.query.t},
         {"l", r.query.l},
         {"value", real_string(r.value)},
         {"neg_log2", r.neg_log2},
         {"neg_log2_exact", real_string(r.neg_log2_exact)},
         {"hypotheses_met", r.hypotheses_met},
         {"near_integer_boundary", r.near_integer_boundary},
         {"stable_under_perturbation", r.stable_under_perturbation}};
}

void to_json(Json& j, const GenConfig& c) {
    j = {{"k", c.k},           {"t", c.t},
         {"l", c.l},           {"D", c.D.str()},
         {"seed", c.seed},     {"twin_precheck", c.twin_precheck},
         {"candidate_budget", c.candidate_budget}};
}

void from_json(const Json& j, GenConfig& c) {
    c.k = j.at("k").get<unsigned>();
    c.t = j.at("t").get<unsigned>();
    c.l = j.at("l").get<unsigned>();
    c.D = parse_bigint(j.at("D").get<std::string>());
    c.seed = j.at("seed").get<u64>();
    c.twin_precheck = j.at("twin_precheck").get<bool>();
    c.candidate_budget = j.at("candidate_budget").get<u64>();
}

void to_json(Json& j, const RunRecord& r) {
    j = {{"config", r.config},
         {"candidates_tested", r.candidates_tested},
         {"rejected_trial_division", r.rejected_trial_division},
         {"rejected_gcd", r.rejected_gcd},
         {"rejected_twin", r.rejected_twin},
         {"output", r.output.str()},
         {"output_is_composite", r.output_is_composite},
         {"rounds_per_candidate", r.rounds_per_candidate}};
}

void from_json(const Json& j, RunRecord& r) {
    r.config = j.at("config").get<GenConfig>();
    r.candidates_tested = j.at("candidates_tested").get<u64>();
    r.rejected_trial_division = j.at("rejected_trial_division").get<u64>();
    r.rejected_gcd = j.at("rejected_gcd").get<u64>();
    r.rejected_twin = j.at("rejected_twin").get<u64>();
    r.output = parse_bigint(j.at("output").get<std::string>());
    r.output_is_composite = j.at("output_is_composite").get<bool>();
    r.rounds_per_candidate = j.at("rounds_per_candidate").get<std::vector<unsigned>>();
}

void to_json(Json& j, const ExactResult& r) {
    j = {{"k", r.query.k},
         {"t", r.query.t},
         {"l", r.query.l},
         {"D", r.query.D.str()},
         {"method", r.query.method == ExactMethod::ClosedForm ? "closed_form" : "base_enumeration"},
         {"candidates", r.candidates},
         {"composites", r.composites},
         {"primes", r.primes},
         {"alpha_bar_sum", to_string(r.alpha_bar_sum)},
         {"admissible_sum", to_string(r.admissible_sum)},
         {"generator_sum", to_string(r.generator_sum)},
         {"prime_alpha_bar_sum", to_string(r.prime_alpha_bar_sum)},
         {"q", to_string(r.q)},
         {"q_admissible", to_string(r.q_admissible)},
         {"q_generator", to_string(r.q_generator)}};
}

void to_json(Json& j, const McSummary& s) {
    j = {{"config", s.config},
         {"trials", s.trials},
         {"composites", s.composites},
         {"estimate", s.estimate},
         {"se", s.se}};
    j["exact"] = s.exact ? Json(to_string(*s.exact)) : Json(nullptr);
}

}  // namespace lucas
