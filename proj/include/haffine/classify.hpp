#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "haffine/report.hpp"
#include "haffine/series.hpp"

namespace haffine {

// 2^{-1/2} for 1 < p <= 2, 2^{-1/p} for p >= 2
double critical_radius(double p);

struct GridSpec {
  std::size_t n_radial = 128;
  std::size_t n_angular = 512;
};

// images of the critical circle (boundary) and a polar grid of the critical
// disk (interior) under the truncated symbol
SpectrumCloud spectrum_cloud(const SeriesD& u, double p, const GridSpec& grid = {});

// sigma_max(M_N^n)^{1/n} for n = 1..n_max, where M_N is the Toeplitz section
// of the symbol scaled to radius 2^{-1/2}
std::vector<std::pair<int, double>> spectral_radius_estimate(const SeriesD& u, std::size_t N,
                                                             int n_max,
                                                             std::uint64_t seed = 12345);

// the per-p basis/equivalence picture of a polynomial symbol, read off the
// smallest-modulus zero
ClassificationReport classify_polynomial(const std::vector<CD>& poly,
                                         const std::vector<double>& p_list);

struct VerdictOptions {
  std::size_t N = 512;
  std::size_t n_samples = 4096;
  std::uint64_t seed = 12345;
};

VerdictReport basis_verdict(const SeriesD& fhat, bool is_polynomial, double p,
                              const VerdictOptions& opts = {});

}  // namespace haffine
