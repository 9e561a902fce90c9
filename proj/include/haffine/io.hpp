#pragma once

#include <string>

#include <json.hpp>

#include "haffine/report.hpp"
#include "haffine/scalar.hpp"
#include "haffine/series.hpp"
#include "haffine/stepfn.hpp"

namespace haffine {

using json = nlohmann::json;

// scalar literals: "p/q", "-3", "p/q+r/s i", "p/q-r/s i", or a decimal like
// "0.25" / "1e-3" (decimals are float-only)
bool is_rational_literal(const std::string& s);
Rat parse_rat(const std::string& s);
CplxQ parse_scalar_exact(const std::string& s);
CD parse_scalar_float(const std::string& s);

std::string scalar_to_string(const CplxQ& s);
std::string fmt_double(double v);  // shortest round-trip-safe form
std::string scalar_to_string(const CD& s);

StepQ parse_step_exact(const json& j);
StepD parse_step_float(const json& j);
json step_to_json(const StepQ& x);
json step_to_json(const StepD& x);

SymbolSpec parse_symbol_spec(const json& j);
json symbol_spec_to_json(const SymbolSpec& spec);

// '@path' loads a file, otherwise the argument itself is parsed
json load_json_arg(const std::string& arg);

json norm_report_to_json(const NormReport& r);
json classification_to_json(const ClassificationReport& r);
json verdict_to_json(const VerdictReport& r);
std::string spectrum_to_csv(const SpectrumCloud& cloud);

}  // namespace haffine
