#pragma once

#include <optional>
#include <string>
#include <vector>

#include "haffine/chaos.hpp"
#include "haffine/report.hpp"
#include "haffine/scalar.hpp"

namespace haffine {

// Truncated one-variable power series sum a_k z^k.
template <class S>
struct PowerSeries {
  std::vector<S> coeffs;
  std::optional<double> radius;  // radius of convergence when known

  S coeff(std::size_t k) const {
    return k < coeffs.size() ? coeffs[k] : scalar_traits<S>::zero();
  }
  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

using SeriesQ = PowerSeries<CplxQ>;
using SeriesD = PowerSeries<CD>;

template <class S>
PowerSeries<S> symbol_of(const Chaos1<S>& c) {
  PowerSeries<S> u;
  u.coeffs = c.coeffs;
  return u;
}

template <class S>
Chaos1<S> chaos_of(const PowerSeries<S>& u, Provenance prov = Provenance::user) {
  Chaos1<S> c;
  c.coeffs = u.coeffs;
  c.prov = prov;
  return c;
}

inline SeriesD to_cd_series(const SeriesQ& u) {
  SeriesD out;
  out.radius = u.radius;
  out.coeffs.reserve(u.coeffs.size());
  for (const auto& a : u.coeffs) out.coeffs.push_back(to_cd(a));
  return out;
}

// ---- ring operations (all truncated to degree N) ------------------------

template <class S>
PowerSeries<S> ps_add(const PowerSeries<S>& u, const PowerSeries<S>& v) {
  PowerSeries<S> out;
  out.coeffs.resize(std::max(u.coeffs.size(), v.coeffs.size()), scalar_traits<S>::zero());
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] = u.coeff(k) + v.coeff(k);
  return out;
}

template <class S>
PowerSeries<S> ps_sub(const PowerSeries<S>& u, const PowerSeries<S>& v) {
  PowerSeries<S> out;
  out.coeffs.resize(std::max(u.coeffs.size(), v.coeffs.size()), scalar_traits<S>::zero());
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] = u.coeff(k) - v.coeff(k);
  return out;
}

template <class S>
PowerSeries<S> ps_mul(const PowerSeries<S>& u, const PowerSeries<S>& v, std::size_t N) {
  PowerSeries<S> out;
  out.coeffs.assign(N + 1, scalar_traits<S>::zero());
  const std::size_t nu = std::min(u.coeffs.size(), N + 1);
  for (std::size_t i = 0; i < nu; ++i) {
    if (scalar_traits<S>::is_zero(u.coeffs[i])) continue;
    const std::size_t nv = std::min(v.coeffs.size(), N + 1 - i);
    for (std::size_t j = 0; j < nv; ++j) out.coeffs[i + j] += u.coeffs[i] * v.coeffs[j];
  }
  return out;
}

template <class S>
PowerSeries<S> ps_reciprocal(const PowerSeries<S>& u, std::size_t N) {
  if (u.coeffs.empty() || scalar_traits<S>::is_zero(u.coeffs[0]))
    throw error("reciprocal of a series vanishing at the origin");
  PowerSeries<S> out;
  out.coeffs.assign(N + 1, scalar_traits<S>::zero());
  out.coeffs[0] = scalar_traits<S>::one() / u.coeffs[0];
  for (std::size_t k = 1; k <= N; ++k) {
    S s = scalar_traits<S>::zero();
    for (std::size_t j = 0; j < k; ++j) s += u.coeff(k - j) * out.coeffs[j];
    out.coeffs[k] = -(s / u.coeffs[0]);
  }
  return out;
}

// u(v(z)) for v with v(0) = 0
template <class S>
PowerSeries<S> ps_compose(const PowerSeries<S>& u, const PowerSeries<S>& v, std::size_t N) {
  if (!v.coeffs.empty() && !scalar_traits<S>::is_zero(v.coeffs[0]))
    throw error("compose requires inner series with zero constant term");
  PowerSeries<S> out;
  out.coeffs.assign(N + 1, scalar_traits<S>::zero());
  for (std::size_t k = u.coeffs.size(); k-- > 0;) {
    out = ps_mul(out, v, N);
    out.coeffs.resize(N + 1, scalar_traits<S>::zero());
    out.coeffs[0] += u.coeffs[k];
  }
  return out;
}

// exp(u) for u with u(0) = 0, via e' = u' e
template <class S>
PowerSeries<S> ps_exp(const PowerSeries<S>& u, std::size_t N) {
  if (!u.coeffs.empty() && !scalar_traits<S>::is_zero(u.coeffs[0]))
    throw error("ps_exp requires zero constant term");
  PowerSeries<S> out;
  out.coeffs.assign(N + 1, scalar_traits<S>::zero());
  out.coeffs[0] = scalar_traits<S>::one();
  for (std::size_t k = 1; k <= N; ++k) {
    S s = scalar_traits<S>::zero();
    for (std::size_t j = 1; j <= k; ++j)
      s += scalar_traits<S>::from_int(static_cast<long>(j)) * u.coeff(j) * out.coeffs[k - j];
    out.coeffs[k] = s * scalar_traits<S>::from_ratio(1, static_cast<long>(k));
  }
  return out;
}

template <class S>
PowerSeries<S> ps_derivative(const PowerSeries<S>& u) {
  PowerSeries<S> out;
  if (u.coeffs.size() <= 1) {
    out.coeffs.assign(1, scalar_traits<S>::zero());
    return out;
  }
  out.coeffs.resize(u.coeffs.size() - 1);
  for (std::size_t k = 1; k < u.coeffs.size(); ++k)
    out.coeffs[k - 1] = scalar_traits<S>::from_int(static_cast<long>(k)) * u.coeffs[k];
  return out;
}

template <class S>
S ps_eval(const PowerSeries<S>& u, const S& z) {
  S w = scalar_traits<S>::zero();
  for (std::size_t k = u.coeffs.size(); k-- > 0;) w = w * z + u.coeffs[k];
  return w;
}

template <class S>
PowerSeries<S> ps_pow(const PowerSeries<S>& u, unsigned n, std::size_t N) {
  PowerSeries<S> out;
  out.coeffs.assign(1, scalar_traits<S>::one());
  for (unsigned i = 0; i < n; ++i) out = ps_mul(out, u, N);
  return out;
}

// ---- coefficient-space norms ----------------------------------------------

// ||u||_{A_p^+(D_R)} truncated at degree N: a certified lower bound of the
// full norm, non-decreasing in N
NormReport ap_norm(const SeriesD& u, double p, double R, std::size_t N);

// exact p-th power of the truncated A_p^+ norm for even integer p and
// rational R^p
Rat ap_norm_pow_exact(const SeriesQ& u, long p, const Rat& R_pow_p, std::size_t N);

// max |u(R e^{i theta})| over equispaced boundary samples of the degree-N
// truncation; certified upper bound adds an arc-gap derivative bound and the
// coefficient tail beyond N when available
NormReport hinf_boundary(const SeriesD& u, double R, std::size_t n_samples, std::size_t N);

// norm of the lower-triangular Toeplitz section with entries b_j = a_j R^j
// acting on l^p; p=2: largest singular value (power iteration); p in {1,inf}:
// exact column/row sum; otherwise an interval [test-vector ratio, l^1 bound]
NormReport multiplier_norm(const SeriesD& u, double p, double R, std::size_t N,
                           std::uint64_t seed = 12345);

double toeplitz_sigma_max(const std::vector<CD>& b, std::size_t N, std::uint64_t seed = 12345);

// ---- symbol-side identities -------------------------------------------------

struct ValueRelationReport {
  bool ok = true;
  long first_failure = -1;  // coefficient degree of the first mismatch
};

// (1-z) * (value series) == (2z-1) * (coefficient series), checked through
// degree N
template <class S>
ValueRelationReport check_value_relation(const Chaos1<S>& c, std::size_t N) {
  const std::vector<S> vals = values_from_coeffs(c, N + 1);
  ValueRelationReport rep;
  for (std::size_t k = 0; k <= N; ++k) {
    const S lhs = k == 0 ? vals[0] : vals[k] - vals[k - 1];
    const S rhs = (k == 0 ? scalar_traits<S>::zero()
                          : scalar_traits<S>::from_int(2) * c.coeff(k - 1)) -
                  c.coeff(k);
    if constexpr (scalar_traits<S>::exact) {
      if (lhs != rhs) {
        rep.ok = false;
        rep.first_failure = static_cast<long>(k);
        return rep;
      }
    } else {
      if (std::abs(scalar_traits<S>::to_cd(lhs) - scalar_traits<S>::to_cd(rhs)) > 1e-12) {
        rep.ok = false;
        rep.first_failure = static_cast<long>(k);
        return rep;
      }
    }
  }
  return rep;
}

struct BvReport {
  double variation_sum = 0.0;   // sum |2 c_k - c_{k+1}|  = sum |f(2^-k)-f(2^-k-1)|
  double coeff_abs_sum = 0.0;   // sum |c_k|
  bool upper_comparison_ok = true;  // |2c_k - c_{k+1}| <= 2|c_k| + |c_{k+1}|
  bool lower_identity_ok = true;    // c_k = sum_{j>=k} 2^{k-j-1}(2c_j - c_{j+1}) + tail
};

template <class S>
BvReport bv_report(const Chaos1<S>& c, std::size_t N) {
  BvReport rep;
  for (std::size_t k = 0; k <= N; ++k) {
    const S diff = scalar_traits<S>::from_int(2) * c.coeff(k) - c.coeff(k + 1);
    const double ad = std::abs(scalar_traits<S>::to_cd(diff));
    const double ak = std::abs(scalar_traits<S>::to_cd(c.coeff(k)));
    const double ak1 = std::abs(scalar_traits<S>::to_cd(c.coeff(k + 1)));
    rep.variation_sum += ad;
    rep.coeff_abs_sum += ak;
    if (ad > 2 * ak + ak1 + 1e-12) rep.upper_comparison_ok = false;
  }
  // telescoping reconstruction of c_k from the variation terms, with the
  // explicit remainder 2^{k-N-1} c_{N+1}
  for (std::size_t k = 0; k <= N; ++k) {
    S s = scalar_traits<S>::zero();
    for (std::size_t j = k; j <= N; ++j) {
      const S diff = scalar_traits<S>::from_int(2) * c.coeff(j) - c.coeff(j + 1);
      s += scalar_traits<S>::scale_pow2(diff, static_cast<long>(k) - static_cast<long>(j) - 1);
    }
    s += scalar_traits<S>::scale_pow2(c.coeff(N + 1), static_cast<long>(k) - static_cast<long>(N) - 1);
    if constexpr (scalar_traits<S>::exact) {
      if (s != c.coeff(k)) rep.lower_identity_ok = false;
    } else {
      if (std::abs(scalar_traits<S>::to_cd(s) - scalar_traits<S>::to_cd(c.coeff(k))) > 1e-9)
        rep.lower_identity_ok = false;
    }
  }
  return rep;
}

// ---- polynomial roots ---------------------------------------------------

struct RootReport {
  std::vector<CD> roots;
  CD z0;             // smallest modulus, ties by smallest argument
  double residual = 0.0;  // max relative residual after refinement
};

RootReport poly_roots(const std::vector<CD>& coeffs);

// ---- symbol generators -----------------------------------------------------

struct SymbolSpec {
  enum class Kind { polynomial, geometric, binomial, counterexample, taylor };
  Kind kind = Kind::polynomial;
  std::vector<std::string> coeffs;  // polynomial / taylor
  std::string a = "0";              // geometric ratio
  double theta = 0.25;              // binomial exponent
  double p = 2.0;                   // binomial / counterexample scale 2^{1/p}
};

// exact-mode generation; throws for float-only kinds
Chaos1Q make_chaos_exact(const SymbolSpec& spec, std::size_t N);
Chaos1D make_chaos_float(const SymbolSpec& spec, std::size_t N);
bool symbol_is_float_only(const SymbolSpec& spec);
// non-fatal diagnostics, e.g. a binomial exponent outside (0, 1 - 1/p)
std::optional<std::string> symbol_warning(const SymbolSpec& spec);
// radius of analyticity when structurally known
std::optional<double> symbol_radius(const SymbolSpec& spec);
bool symbol_is_polynomial(const SymbolSpec& spec);

}  // namespace haffine
