#include "lucas/bounds.hpp"

#include <sstream>

#include <mpfr.h>

#include "lucas/intmath.hpp"

namespace lucas {

namespace {

using boost::multiprecision::floor;
using boost::multiprecision::log;
using boost::multiprecision::log2;
using boost::multiprecision::pow;
using boost::multiprecision::round;
using boost::multiprecision::sqrt;

Real lit(const char* s) { return Real(s); }

Real nudge(Real x, int ulps) {
    for (int i = 0; i < ulps; ++i) mpfr_nextabove(x.backend().data());
    for (int i = 0; i > ulps; --i) mpfr_nextbelow(x.backend().data());
    return x;
}

// Fill the integer fields from the exact -log2 value.
BoundReport finish(std::string theorem, BoundQuery query, const Real& neg_log2, bool hypotheses) {
    BoundReport r;
    r.theorem = std::move(theorem);
    r.query = query;
    r.neg_log2_exact = neg_log2;
    r.value = pow(Real(2), -neg_log2);
    r.hypotheses_met = hypotheses;

    const Real nearest = round(neg_log2);
    const Real gap = boost::multiprecision::abs(neg_log2 - nearest);
    r.near_integer_boundary = gap < lit("1e-6");
    // Values that are integers up to rounding noise are taken as integers.
    const Real snap = pow(Real(2), -(kRealBits - 24)) * (1 + boost::multiprecision::abs(neg_log2));
    const Real floored = gap <= snap ? nearest : floor(neg_log2);
    r.neg_log2 = floored.convert_to<long>();
    r.stable_under_perturbation =
        floor(nudge(neg_log2, -2)) == floor(nudge(neg_log2, 2));
    return r;
}

BoundReport finish_from_value(std::string theorem, BoundQuery query, const Real& value, bool hypotheses) {
    return finish(std::move(theorem), query, -log2(value), hypotheses);
}

Real lg(unsigned x) { return log2(Real(x)); }

bool miller_rabin_moderate_hypothesis(unsigned k, unsigned t) {
    return (k >= 21 && t >= 3 && 9 * u64(t) <= k) || (k >= 88 && t == 2);
}

}  // namespace

Real rho(unsigned l) { return 1 + Real(1) / Real(nth_odd_prime(l + 1)); }

unsigned calc_trial_divisions(unsigned k) {
    if (k <= 512) return 63;
    if (k <= 1024) return 127;
    if (k <= 2048) return 383;
    return 1023;
}

BoundReport bound_q_k1(unsigned k) {
    const Real x = log2(log(Real(k))) + 2 * lg(k) + 2 * (lit("2.3") - sqrt(Real(k)));
    return finish("q_k1", {k, 1, 0}, -x, k >= 2);
}

BoundReport bound_q_kt(unsigned k, unsigned t) {
    const Real x = t * log2(log(Real(k))) + lit("1.5") * lg(k) + t - lit("0.5") * lg(t) +
                   2 * (lit("2.12") - sqrt(Real(u64(t) * k)));
    const bool hyp = (k >= 79 && t >= 3 && 9 * u64(t) <= k) || (k >= 88 && t == 2);
    return finish("q_kt", {k, t, 0}, -x, hyp);
}

BoundReport bound_q_kl1(unsigned k, unsigned l) {
    const Real x = 2 * lg(k) + 2 * (lit("1.8") - sqrt(Real(k))) +
                   (2 * sqrt(Real(k - 1)) - 2) * log2(rho(l));
    return finish("q_kl1", {k, 1, l}, -x, k >= 2);
}

BoundReport bound_q_kl1_127(unsigned k) {
    const Real x = 2 * lg(k) + 2 * (lit("1.729") - lit("0.998") * sqrt(Real(k - 1)));
    return finish("q_kl1_127", {k, 1, 127}, -x, k >= 2);
}

BoundReport bound_q_klt(unsigned k, unsigned t, unsigned l) {
    const Real rt = sqrt(Real(u64(t) * k));
    const Real x = 2 * (lit("1.72") - rt) + lit("1.5") * lg(k) + t + (2 * rt + t) * log2(rho(l));
    const bool hyp = k >= 21 && t >= 2 && 9 * u64(t) <= u64(k) - 1;
    return finish("q_klt", {k, t, l}, -x, hyp);
}

BoundReport bound_q_klt_large_t(unsigned k, unsigned t, unsigned l) {
    const Real r = rho(l);
    const Real K(k), T(t);
    const Real two(2);
    const Real term1 = pow(two, lit("-1.52") - 4 * T) * pow(r, 6 * T) / (pow(two, T) - pow(r, T)) * K;
    const Real term2 = pow(r, 3 * T) * pow(two, lit("-3.55") - 4 * K / 9 - 2 * T) * pow(K, lit("3.75"));
    const Real term3 = pow(r, 5 * T) * pow(two, lit("1.75") - K / 4 - 3 * T) * K;
    const bool hyp = k >= 122 && 9 * u64(t) >= k;
    return finish_from_value("q_klt_large_t", {k, t, l}, term1 + term2 + term3, hyp);
}

BoundReport bound_p_kt_case(unsigned k, unsigned t, MillerRabinCase which) {
    const Real K(k), T(t), two(2);
    switch (which) {
        case MillerRabinCase::T1: {
            const Real x = 2 * lg(k) + 2 * (2 - sqrt(K));
            return finish("p_kt(i)", {k, t, 0}, -x, k >= 2 && t == 1);
        }
        case MillerRabinCase::Moderate: {
            const Real x = lit("1.5") * lg(k) + t - lit("0.5") * lg(t) + 2 * (2 - sqrt(Real(u64(t) * k)));
            return finish("p_kt(ii)", {k, t, 0}, -x, miller_rabin_moderate_hypothesis(k, t));
        }
        case MillerRabinCase::LargeT: {
            const Real v = Real(7) / 20 * K * pow(two, -5 * T) +
                           Real(1) / 7 * pow(K, lit("3.75")) * pow(two, -K / 2 - 2 * T) +
                           12 * K * pow(two, -K / 4 - 3 * T);
            return finish_from_value("p_kt(iii)", {k, t, 0}, v, k >= 21 && 9 * u64(t) >= k);
        }
        case MillerRabinCase::VeryLargeT: {
            const Real x = log2(Real(7)) - lit("3.75") * lg(k) + K / 2 + 2 * T;
            return finish("p_kt(iv)", {k, t, 0}, x, k >= 21 && 4 * u64(t) >= k);
        }
    }
    throw std::invalid_argument("bound_p_kt_case: unknown case");
}

BoundReport bound_p_kt(unsigned k, unsigned t) {
    std::optional<BoundReport> best;
    for (auto which : {MillerRabinCase::T1, MillerRabinCase::Moderate, MillerRabinCase::LargeT,
                       MillerRabinCase::VeryLargeT}) {
        BoundReport r = bound_p_kt_case(k, t, which);
        if (r.hypotheses_met && (!best || r.value < best->value)) best = std::move(r);
    }
    if (best) return *best;
    return bound_p_kt_case(k, t, t == 1 ? MillerRabinCase::T1 : MillerRabinCase::Moderate);
}

GatedValue bound_prime_count(unsigned k) {
    return {lit("0.71867") * pow(Real(2), Real(k)) / k, k >= 21};
}

Real twin_prime_constant() { return lit("0.66016181584686957392781211001455577843262336028473"); }

GatedValue bound_twin_products(unsigned k) {
    return {6 * pow(Real(2), Real(k) / 2) / (Real(k) * k), k >= 122};
}

GatedValue twin_prime_count_bound(const Real& x) {
    const Real lx = log(x);
    return {16 * twin_prime_constant() * x / ((lit("7.5") + lx) * lx), lx > 42};
}

BoundReport evaluate_bound(const std::string& theorem, const BoundQuery& q) {
    if (theorem == "q_k1") return bound_q_k1(q.k);
    if (theorem == "q_kt") return bound_q_kt(q.k, q.t);
    if (theorem == "q_kl1") return bound_q_kl1(q.k, q.l);
    if (theorem == "q_kl1_127") return bound_q_kl1_127(q.k);
    if (theorem == "q_klt") return bound_q_klt(q.k, q.t, q.l);
    if (theorem == "q_klt_large_t") return bound_q_klt_large_t(q.k, q.t, q.l);
    if (theorem == "p_kt") return bound_p_kt(q.k, q.t);
    throw std::invalid_argument("unknown theorem '" + theorem + "'");
}

BoundTable emit_table(int which) {
    BoundTable table;
    if (which == 1) {
        table.header = {"k", "-log2 p_k1", "-log2 q_k1", "-log2 q_kl1"};
        for (unsigned k : kTableRows) {
            table.row_keys.push_back(k);
            table.cells.push_back({{bound_p_kt_case(k, 1, MillerRabinCase::T1).neg_log2, {}},
                                   {bound_q_k1(k).neg_log2, {}},
                                   {bound_q_kl1(k, calc_trial_divisions(k)).neg_log2, {}}});
        }
        return table;
    }
    if (which < 2 || which > 4) throw std::invalid_argument("emit_table: table must be 1, 2, 3 or 4");

    table.header = {"k\\t"};
    for (unsigned t : kTableColumns) table.header.push_back(std::to_string(t));
    for (unsigned k : kTableRows) {
        table.row_keys.push_back(k);
        std::vector<TableCell> row;
        for (unsigned t : kTableColumns) {
            BoundReport r;
            std::string gate;
            if (which == 2) {
                r = bound_q_kt(k, t);
                gate = "gate:t>k/9";
            } else if (which == 3) {
                r = bound_q_klt(k, t, calc_trial_divisions(k));
                gate = "gate:t>(k-1)/9";
            } else {
                r = bound_p_kt_case(k, t, MillerRabinCase::Moderate);
                gate = "gate:t>k/9";
            }
            if (r.hypotheses_met)
                row.push_back({r.neg_log2, {}});
            else
                row.push_back({std::nullopt, gate});
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

std::string to_csv(const BoundTable& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (std::size_t r = 0; r < table.row_keys.size(); ++r) {
        out << table.row_keys[r];
        for (const auto& cell : table.cells[r]) {
            out << ',';
            if (cell.value)
                out << *cell.value;
            else
                out << cell.gate;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace lucas
