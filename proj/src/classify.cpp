#include "haffine/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "haffine/kernels.hpp"

namespace haffine {

double critical_radius(double p) {
  if (!(p > 1.0)) throw error("critical_radius requires p > 1");
  return p <= 2.0 ? std::pow(2.0, -0.5) : std::pow(2.0, -1.0 / p);
}

SpectrumCloud spectrum_cloud(const SeriesD& u, double p, const GridSpec& grid) {
  const double R = critical_radius(p);
  SpectrumCloud cloud;
  cloud.radius_used = R;
  cloud.p = p;
  const std::size_t na = std::max<std::size_t>(grid.n_angular, 8);
  const std::size_t nr = std::max<std::size_t>(grid.n_radial, 1);
  std::vector<CD> pts(na), vals(na);
  // center point
  cloud.points.push_back({ps_eval(u, CD{0.0, 0.0}), false});
  for (std::size_t i = 1; i <= nr; ++i) {
    const double r = R * static_cast<double>(i) / static_cast<double>(nr);
    for (std::size_t j = 0; j < na; ++j) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(na);
      pts[j] = CD{r * std::cos(th), r * std::sin(th)};
    }
    kern::poly_eval_many(u.coeffs.data(), u.coeffs.size(), pts.data(), vals.data(), na);
    const bool boundary = i == nr;
    for (std::size_t j = 0; j < na; ++j) cloud.points.push_back({vals[j], boundary});
  }
  return cloud;
}

std::vector<std::pair<int, double>> spectral_radius_estimate(const SeriesD& u, std::size_t N,
                                                             int n_max, std::uint64_t seed) {
  const double R = std::pow(2.0, -0.5);
  std::vector<CD> b(std::min(u.coeffs.size(), N), CD{0.0, 0.0});
  double w = 1.0;
  for (std::size_t j = 0; j < b.size(); ++j, w *= R) b[j] = u.coeffs[j] * w;
  std::vector<CD> pw(N, CD{0.0, 0.0}), tmp(N);
  pw[0] = CD{1.0, 0.0};
  std::vector<std::pair<int, double>> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    kern::conv_lower(b.data(), b.size(), pw.data(), tmp.data(), N);
    pw.swap(tmp);
    const double sigma = toeplitz_sigma_max(pw, N, seed);
    out.emplace_back(n, std::pow(sigma, 1.0 / static_cast<double>(n)));
  }
  return out;
}

namespace {

const double kBoundaryTol = 1e-9;

PerPVerdict verdict_for(double p, char tag, double p0) {
  PerPVerdict v;
  v.p = p;
  switch (tag) {
    case 'a':
      v.is_basis = false;
      v.is_equivalent = false;
      v.evidence = {"zero-within-radius-one-half"};
      break;
    case 'b':
      v.is_basis = p < p0;
      v.is_equivalent = false;
      v.evidence = v.is_basis
                       ? std::vector<std::string>{"below-p0", "zero-radius-in-lower-branch"}
                       : std::vector<std::string>{"at-or-above-p0"};
      break;
    case 'c':
      v.is_basis = p < p0;
      v.is_equivalent = p < p0;
      v.evidence = v.is_basis
                       ? std::vector<std::string>{"below-p0", "zero-free-critical-disk"}
                       : std::vector<std::string>{"at-or-above-p0"};
      break;
    default:
      v.is_basis = true;
      v.is_equivalent = true;
      v.evidence = {"zero-free-on-all-critical-disks"};
      break;
  }
  return v;
}

}  // namespace

ClassificationReport classify_polynomial(const std::vector<CD>& poly,
                                         const std::vector<double>& p_list) {
  bool all_zero = true;
  for (const auto& c : poly)
    if (std::abs(c) != 0.0) all_zero = false;
  if (poly.empty() || all_zero) throw error("zero polynomial cannot be classified");

  ClassificationReport rep;
  const RootReport roots = poly_roots(poly);
  if (roots.roots.empty()) {
    // nonzero constant: no zeros anywhere
    rep.z0 = CD{std::numeric_limits<double>::infinity(), 0.0};
    rep.abs_z0 = std::numeric_limits<double>::infinity();
    rep.case_tag = 'd';
    for (double p : p_list) rep.per_p.push_back(verdict_for(p, 'd', 0.0));
    return rep;
  }
  rep.z0 = roots.z0;
  const double az = std::abs(roots.z0);
  rep.abs_z0 = az;
  const double r2 = std::pow(2.0, -0.5);
  rep.boundary_ambiguous = std::abs(az - 0.5) <= kBoundaryTol ||
                           std::abs(az - r2) <= kBoundaryTol || std::abs(az - 1.0) <= kBoundaryTol;
  double p0 = 0.0;
  if (az <= 0.5) {
    rep.case_tag = 'a';
  } else if (az <= r2) {
    rep.case_tag = 'b';
    p0 = -1.0 / std::log2(az);
    rep.p0 = p0;
  } else if (az < 1.0) {
    rep.case_tag = 'c';
    p0 = -1.0 / std::log2(az);
    rep.p0 = p0;
  } else {
    rep.case_tag = 'd';
  }
  for (double p : p_list) {
    PerPVerdict v = verdict_for(p, rep.case_tag, p0);
    if (rep.boundary_ambiguous) v.evidence.push_back("boundary-ambiguous");
    rep.per_p.push_back(std::move(v));
  }
  return rep;
}

namespace {

// min |u| over sampled circles of radii fractions*R (degree-N evaluation)
double sampled_min_abs(const SeriesD& u, double R, std::size_t n_samples) {
  std::vector<CD> pts(n_samples), vals(n_samples);
  double best = std::numeric_limits<double>::infinity();
  for (double frac : {0.25, 0.5, 0.75, 1.0}) {
    const double r = R * frac;
    for (std::size_t j = 0; j < n_samples; ++j) {
      const double th =
          2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_samples);
      pts[j] = CD{r * std::cos(th), r * std::sin(th)};
    }
    kern::poly_eval_many(u.coeffs.data(), u.coeffs.size(), pts.data(), vals.data(), n_samples);
    for (const auto& v : vals) best = std::min(best, std::abs(v));
  }
  return best;
}

// growth of the truncated coefficient-l1 norm at radius R between half and
// full truncation; ratios well above 1 flag boundary blow-up
double a1_growth_ratio(const SeriesD& u, double R) {
  const std::size_t N = u.coeffs.size();
  double half = 0.0, full = 0.0, w = 1.0;
  for (std::size_t k = 0; k < N; ++k, w *= R) {
    const double t = std::abs(u.coeffs[k]) * w;
    full += t;
    if (k < N / 2) half += t;
  }
  return half > 0.0 ? full / half : 1.0;
}

const double kGrowthThreshold = 1.1;

}  // namespace

VerdictReport basis_verdict(const SeriesD& fhat, bool is_polynomial, double p,
                              const VerdictOptions& opts) {
  if (!(p > 1.0)) throw error("basis_verdict requires p > 1");
  VerdictReport rep;
  rep.p = p;
  const double Rp = critical_radius(p);

  if (is_polynomial) {
    bool nonzero = false;
    for (const auto& c : fhat.coeffs)
      if (std::abs(c) != 0.0) nonzero = true;
    if (!nonzero) throw error("zero polynomial");
    const RootReport roots = poly_roots(fhat.coeffs);
    for (const CD& z : roots.roots) {
      const double az = std::abs(z);
      const bool inside = p <= 2.0 ? az <= Rp + 1e-15 : az < Rp - 1e-12;
      if (inside) {
        rep.verdict = "certified-negative";
        rep.evidence.push_back("zero-in-critical-disk");
        return rep;
      }
      if (p > 2.0 && std::abs(az - Rp) <= 1e-12) rep.evidence.push_back("zero-on-critical-boundary");
    }
  }

  const NormReport top = hinf_boundary(fhat, Rp, opts.n_samples, fhat.degree());
  rep.upper_bound_B = top.value;
  const double min_abs = sampled_min_abs(fhat, Rp, opts.n_samples);
  rep.lower_bound_A = min_abs;

  if (p <= 2.0) {
    if (is_polynomial) {
      rep.verdict = "numeric-positive";
      rep.evidence.push_back("zero-free-closed-critical-disk");
      return rep;
    }
    if (a1_growth_ratio(fhat, Rp) > kGrowthThreshold) {
      rep.verdict = "inconclusive";
      rep.evidence.push_back("boundary-growth");
      return rep;
    }
    if (min_abs > 1e-9) {
      rep.verdict = "numeric-positive";
      rep.evidence.push_back("sampled-modulus-bounded-away-from-zero");
    } else {
      rep.verdict = "inconclusive";
      rep.evidence.push_back("small-modulus-detected");
    }
    return rep;
  }

  // p > 2: zero-freeness on the open disk is only necessary; report
  // truncated multiplier evidence for the symbol and its reciprocal
  rep.multiplier_f = multiplier_norm(fhat, p, Rp, opts.N, opts.seed);
  bool dual_ok = min_abs > 1e-12;
  if (dual_ok) {
    const SeriesD dual = ps_reciprocal(fhat, fhat.degree());
    rep.multiplier_dual = multiplier_norm(dual, p, Rp, opts.N, opts.seed);
    if (a1_growth_ratio(dual, Rp) > kGrowthThreshold) {
      rep.evidence.push_back("dual-boundary-growth");
      rep.verdict = "inconclusive";
      return rep;
    }
  }
  if (a1_growth_ratio(fhat, Rp) > kGrowthThreshold) {
    rep.evidence.push_back("boundary-growth");
    rep.verdict = "inconclusive";
    return rep;
  }
  const bool boundary_zero =
      std::find(rep.evidence.begin(), rep.evidence.end(), "zero-on-critical-boundary") !=
      rep.evidence.end();
  if (is_polynomial && dual_ok && !boundary_zero) {
    rep.verdict = "numeric-positive";
    rep.evidence.push_back("zero-free-open-critical-disk");
  } else if (!is_polynomial && dual_ok && min_abs > 1e-9) {
    rep.verdict = "numeric-positive";
    rep.evidence.push_back("sampled-modulus-bounded-away-from-zero");
  } else {
    rep.verdict = "inconclusive";
    if (!dual_ok) rep.evidence.push_back("small-modulus-detected");
  }
  return rep;
}

}  // namespace haffine
