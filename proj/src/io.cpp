#include "haffine/io.hpp"

#include <cassert>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace haffine {

namespace {

// one signed integer-ratio token: [+-]?digits(/digits)?
// (a leading '+' is consumed but not emitted: mpq_set_str rejects it)
bool scan_ratio(const std::string& s, std::size_t& pos, std::string& out) {
  std::size_t p = pos;
  std::string tok;
  if (p < s.size() && (s[p] == '+' || s[p] == '-')) {
    if (s[p] == '-') tok += s[p];
    ++p;
  }
  std::size_t digits = 0;
  while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) {
    tok += s[p++];
    ++digits;
  }
  if (digits == 0) return false;
  if (p < s.size() && s[p] == '/') {
    tok += s[p++];
    std::size_t den = 0;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) {
      tok += s[p++];
      ++den;
    }
    if (den == 0) return false;
  }
  pos = p;
  out = tok;
  return true;
}

void skip_spaces(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && s[pos] == ' ') ++pos;
}

}  // namespace

bool is_rational_literal(const std::string& s) {
  std::size_t pos = 0;
  std::string tok;
  skip_spaces(s, pos);
  if (!scan_ratio(s, pos, tok)) return false;
  skip_spaces(s, pos);
  if (pos == s.size()) return true;
  // imaginary part
  if (s[pos] != '+' && s[pos] != '-') return false;
  if (!scan_ratio(s, pos, tok)) return false;
  skip_spaces(s, pos);
  if (pos == s.size() || s[pos] != 'i') return false;
  ++pos;
  skip_spaces(s, pos);
  return pos == s.size();
}

Rat parse_rat(const std::string& s) {
  std::size_t pos = 0;
  std::string tok;
  skip_spaces(s, pos);
  if (!scan_ratio(s, pos, tok)) throw parse_error("invalid rational '" + s + "' at position " + std::to_string(pos));
  skip_spaces(s, pos);
  if (pos != s.size())
    throw parse_error("trailing characters in rational '" + s + "' at position " + std::to_string(pos));
  Rat r;
  if (mpq_set_str(r.get_mpq_t(), tok.c_str(), 10) != 0)
    throw parse_error("invalid rational '" + s + "'");
  if (mpz_cmp_ui(mpq_denref(r.get_mpq_t()), 0) == 0)
    throw parse_error("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

CplxQ parse_scalar_exact(const std::string& s) {
  std::size_t pos = 0;
  std::string re_tok, im_tok;
  skip_spaces(s, pos);
  if (!scan_ratio(s, pos, re_tok))
    throw parse_error("invalid scalar '" + s + "' at position " + std::to_string(pos));
  skip_spaces(s, pos);
  CplxQ out;
  {
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), re_tok.c_str(), 10) != 0 ||
        mpz_cmp_ui(mpq_denref(r.get_mpq_t()), 0) == 0)
      throw parse_error("invalid scalar '" + s + "'");
    r.canonicalize();
    out.re = r;
  }
  if (pos == s.size()) return out;
  if (s[pos] != '+' && s[pos] != '-')
    throw parse_error("invalid scalar '" + s + "' at position " + std::to_string(pos));
  if (!scan_ratio(s, pos, im_tok))
    throw parse_error("invalid scalar '" + s + "' at position " + std::to_string(pos));
  skip_spaces(s, pos);
  if (pos == s.size() || s[pos] != 'i')
    throw parse_error("expected 'i' in scalar '" + s + "' at position " + std::to_string(pos));
  ++pos;
  skip_spaces(s, pos);
  if (pos != s.size())
    throw parse_error("trailing characters in scalar '" + s + "' at position " + std::to_string(pos));
  Rat r;
  if (mpq_set_str(r.get_mpq_t(), im_tok.c_str(), 10) != 0 ||
      mpz_cmp_ui(mpq_denref(r.get_mpq_t()), 0) == 0)
    throw parse_error("invalid scalar '" + s + "'");
  r.canonicalize();
  out.im = r;
  return out;
}

CD parse_scalar_float(const std::string& s) {
  if (is_rational_literal(s)) {
    const CplxQ q = parse_scalar_exact(s);
    return to_cd(q);
  }
  // decimal, possibly with an imaginary part "a+bi" / "a-bi"
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double re = std::strtod(begin, &end);
  if (end == begin) throw parse_error("invalid number '" + s + "'");
  std::size_t pos = static_cast<std::size_t>(end - begin);
  skip_spaces(s, pos);
  if (pos == s.size()) return CD{re, 0.0};
  if (s[pos] != '+' && s[pos] != '-')
    throw parse_error("invalid number '" + s + "' at position " + std::to_string(pos));
  const char* ib = s.c_str() + pos;
  char* iend = nullptr;
  const double im = std::strtod(ib, &iend);
  if (iend == ib) throw parse_error("invalid number '" + s + "' at position " + std::to_string(pos));
  pos = static_cast<std::size_t>(iend - s.c_str());
  skip_spaces(s, pos);
  if (pos == s.size() || s[pos] != 'i')
    throw parse_error("expected 'i' in '" + s + "' at position " + std::to_string(pos));
  ++pos;
  skip_spaces(s, pos);
  if (pos != s.size())
    throw parse_error("trailing characters in '" + s + "' at position " + std::to_string(pos));
  return CD{re, im};
}

std::string scalar_to_string(const CplxQ& s) {
  if (s.im == 0) return rat_to_string(s.re);
  std::string out = rat_to_string(s.re);
  if (s.im > 0) out += "+";
  Rat im = s.im;
  out += rat_to_string(im) + " i";
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  assert(ec == std::errc());
  return std::string(buf, ptr);
}

std::string scalar_to_string(const CD& s) {
  if (s.imag() == 0.0) return fmt_double(s.real());
  std::string out = fmt_double(s.real());
  if (s.imag() >= 0.0) out += "+";
  out += fmt_double(s.imag()) + " i";
  return out;
}

namespace {

void check_step_json(const json& j) {
  if (!j.is_object() || !j.contains("level") || !j.contains("values"))
    throw parse_error("step function JSON needs {\"level\": m, \"values\": [...]}");
  if (!j["level"].is_number_integer()) throw parse_error("step level must be an integer");
  if (!j["values"].is_array()) throw parse_error("step values must be an array");
  const long lvl = j["level"].get<long>();
  if (lvl < 0 || lvl > 30) throw parse_error("step level out of range");
  if (j["values"].size() != (std::size_t{1} << lvl))
    throw parse_error("step values array must have 2^level entries");
}

}  // namespace

StepQ parse_step_exact(const json& j) {
  check_step_json(j);
  StepQ x(j["level"].get<int>(), {});
  x.values.reserve(j["values"].size());
  for (const auto& v : j["values"]) {
    if (!v.is_string())
      throw parse_error("exact mode step values must be rational strings");
    x.values.push_back(parse_scalar_exact(v.get<std::string>()));
  }
  StepQ::check_level(x.level);
  return x;
}

StepD parse_step_float(const json& j) {
  check_step_json(j);
  StepD x(j["level"].get<int>(), {});
  x.values.reserve(j["values"].size());
  for (const auto& v : j["values"]) {
    if (v.is_number())
      x.values.push_back(CD{v.get<double>(), 0.0});
    else if (v.is_string())
      x.values.push_back(parse_scalar_float(v.get<std::string>()));
    else
      throw parse_error("step values must be numbers or strings");
  }
  StepD::check_level(x.level);
  return x;
}

json step_to_json(const StepQ& x) {
  json vals = json::array();
  for (const auto& v : x.values) vals.push_back(scalar_to_string(v));
  return json{{"level", x.level}, {"values", vals}};
}

json step_to_json(const StepD& x) {
  json vals = json::array();
  for (const auto& v : x.values) vals.push_back(scalar_to_string(v));
  return json{{"level", x.level}, {"values", vals}};
}

SymbolSpec parse_symbol_spec(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw parse_error("symbol JSON needs a \"kind\"");
  SymbolSpec spec;
  const std::string kind = j["kind"].get<std::string>();
  using K = SymbolSpec::Kind;
  if (kind == "polynomial" || kind == "taylor") {
    spec.kind = kind == "polynomial" ? K::polynomial : K::taylor;
    if (!j.contains("coeffs") || !j["coeffs"].is_array())
      throw parse_error("symbol kind '" + kind + "' needs a \"coeffs\" array");
    for (const auto& v : j["coeffs"]) {
      if (v.is_number())
        spec.coeffs.push_back(fmt_double(v.get<double>()));
      else if (v.is_string())
        spec.coeffs.push_back(v.get<std::string>());
      else
        throw parse_error("symbol coefficients must be strings or numbers");
    }
    // validate eagerly so malformed entries fail at parse time
    for (const auto& s : spec.coeffs)
      if (is_rational_literal(s))
        parse_scalar_exact(s);
      else
        parse_scalar_float(s);
  } else if (kind == "geometric") {
    spec.kind = K::geometric;
    if (!j.contains("a")) throw parse_error("geometric symbol needs \"a\"");
    spec.a = j["a"].is_number() ? fmt_double(j["a"].get<double>()) : j["a"].get<std::string>();
    parse_scalar_float(spec.a);
  } else if (kind == "binomial") {
    spec.kind = K::binomial;
    if (!j.contains("theta") || !j.contains("p"))
      throw parse_error("binomial symbol needs \"theta\" and \"p\"");
    spec.theta = j["theta"].get<double>();
    spec.p = j["p"].get<double>();
  } else if (kind == "counterexample") {
    spec.kind = K::counterexample;
    spec.p = j.value("p", 2.0);
  } else {
    throw parse_error("unknown symbol kind '" + kind + "'");
  }
  return spec;
}

json symbol_spec_to_json(const SymbolSpec& spec) {
  using K = SymbolSpec::Kind;
  switch (spec.kind) {
    case K::polynomial:
      return json{{"kind", "polynomial"}, {"coeffs", spec.coeffs}};
    case K::taylor:
      return json{{"kind", "taylor"}, {"coeffs", spec.coeffs}};
    case K::geometric:
      return json{{"kind", "geometric"}, {"a", spec.a}};
    case K::binomial:
      return json{{"kind", "binomial"}, {"theta", spec.theta}, {"p", spec.p}};
    case K::counterexample:
      return json{{"kind", "counterexample"}, {"p", spec.p}};
  }
  return json{};
}

json load_json_arg(const std::string& arg) {
  std::string text;
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw error("cannot open file '" + arg.substr(1) + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    text = arg;
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("JSON parse error: ") + e.what());
  }
}

json norm_report_to_json(const NormReport& r) {
  json j{{"value", r.value}, {"method", r.method}, {"mode", r.mode}};
  if (r.certified_lower) j["certified_lower"] = *r.certified_lower;
  if (r.certified_upper) j["certified_upper"] = *r.certified_upper;
  if (!r.truncation.empty()) j["truncation"] = r.truncation;
  if (r.exact_sq) j["exact_sq"] = *r.exact_sq;
  if (r.note) j["note"] = *r.note;
  return j;
}

json classification_to_json(const ClassificationReport& r) {
  json per = json::array();
  for (const auto& v : r.per_p)
    per.push_back(json{{"p", v.p},
                       {"is_basis", v.is_basis},
                       {"is_equivalent", v.is_equivalent},
                       {"evidence", v.evidence}});
  json j{{"z0", {{"re", r.z0.real()}, {"im", r.z0.imag()}}},
         {"abs_z0", r.abs_z0},
         {"case", std::string(1, r.case_tag)},
         {"boundary_ambiguous", r.boundary_ambiguous},
         {"per_p", per}};
  if (r.p0)
    j["p0"] = *r.p0;
  else
    j["p0"] = nullptr;
  return j;
}

json verdict_to_json(const VerdictReport& r) {
  json j{{"p", r.p}, {"verdict", r.verdict}, {"evidence", r.evidence}};
  if (r.lower_bound_A) j["A"] = *r.lower_bound_A;
  if (r.upper_bound_B) j["B"] = *r.upper_bound_B;
  if (r.multiplier_f) j["multiplier_f"] = norm_report_to_json(*r.multiplier_f);
  if (r.multiplier_dual) j["multiplier_dual"] = norm_report_to_json(*r.multiplier_dual);
  return j;
}

std::string spectrum_to_csv(const SpectrumCloud& cloud) {
  std::string out = "re,im,source\n";
  for (const auto& pt : cloud.points) {
    out += fmt_double(pt.value.real());
    out += ',';
    out += fmt_double(pt.value.imag());
    out += ',';
    out += pt.boundary ? "boundary" : "interior";
    out += '\n';
  }
  return out;
}

}  // namespace haffine
