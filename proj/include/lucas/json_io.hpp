#pragma once

// JSON encodings used by the CLI and by the experiment record files. Big
// integers, rationals and high-precision reals are always strings.

#include "json.hpp"

#include "lucas/bounds.hpp"
#include "lucas/experiment.hpp"
#include "lucas/lucas_engine.hpp"
#include "lucas/sl_census.hpp"
#include "lucas/worst_case.hpp"

namespace lucas {

using Json = nlohmann::ordered_json;

BigInt parse_bigint(const std::string& text);
Rational parse_rational(const std::string& text);
/// Scientific notation with `digits` significant digits.
std::string real_string(const Real& x, int digits = 30);

std::string_view to_string(Verdict v);

void to_json(Json& j, const TestOutcome& outcome);
void to_json(Json& j, const EpsDecomp& decomp);
void to_json(Json& j, const AlphaReport& report);
void to_json(Json& j, const C3Form& form);
void to_json(Json& j, const BoundReport& report);
void to_json(Json& j, const GenConfig& config);
void from_json(const Json& j, GenConfig& config);
void to_json(Json& j, const RunRecord& record);
void from_json(const Json& j, RunRecord& record);
void to_json(Json& j, const ExactResult& result);
void to_json(Json& j, const McSummary& summary);

}  // namespace lucas
