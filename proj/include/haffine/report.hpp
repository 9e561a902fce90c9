#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace haffine {

// Norm value with optional certified enclosure and the parameters that
// produced it. `exact_sq` carries the exact rational square (or p-th power)
// when the computation ran in exact mode.
struct NormReport {
  double value = 0.0;
  std::optional<double> certified_lower;
  std::optional<double> certified_upper;
  std::string method;
  std::string mode = "float";  // "exact" | "float"
  std::map<std::string, double> truncation;
  std::optional<std::string> exact_sq;
  std::optional<std::string> note;
};

struct SpectrumPoint {
  std::complex<double> value;
  bool boundary = false;
};

struct SpectrumCloud {
  std::vector<SpectrumPoint> points;
  double radius_used = 0.0;
  double p = 2.0;
};

struct PerPVerdict {
  double p = 2.0;
  bool is_basis = false;
  bool is_equivalent = false;
  std::vector<std::string> evidence;
};

struct ClassificationReport {
  std::complex<double> z0;
  double abs_z0 = 0.0;
  std::optional<double> p0;  // finite only in cases b and c
  char case_tag = 'd';       // 'a' | 'b' | 'c' | 'd'
  bool boundary_ambiguous = false;
  std::vector<PerPVerdict> per_p;
};

struct VerdictReport {
  double p = 2.0;
  std::string verdict;  // "certified-negative" | "numeric-positive" | "inconclusive"
  std::vector<std::string> evidence;
  std::optional<double> lower_bound_A;
  std::optional<double> upper_bound_B;
  std::optional<NormReport> multiplier_f;
  std::optional<NormReport> multiplier_dual;
};

}  // namespace haffine
