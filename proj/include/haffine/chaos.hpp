#pragma once

#include <bit>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "haffine/stepfn.hpp"

namespace haffine {

enum class Provenance { polynomial, geometric, binomial_theta, counterexample, taylor, user };

// First-order Haar chaos f = sum_k c_k h_{2^k}, stored by its coefficient
// sequence up to some depth.
template <class S>
struct Chaos1 {
  std::vector<S> coeffs;
  Provenance prov = Provenance::user;

  S coeff(std::size_t k) const {
    return k < coeffs.size() ? coeffs[k] : scalar_traits<S>::zero();
  }
  std::size_t depth() const { return coeffs.size(); }
};

template <class S>
struct DualCoeffs {
  std::vector<S> coeffs;
};

// Haar chaos of order d, coefficients indexed by gap vectors.
template <class S>
struct ChaosD {
  int order = 1;
  std::map<GapVector, S> coeffs;
};

using Chaos1Q = Chaos1<CplxQ>;
using Chaos1D = Chaos1<CD>;

// ---- coefficient <-> value conversion ----------------------------------

// c_k = -v_k - sum_{j<k} 2^{k-j-1} v_j where v_j = f(1/2^j)
template <class S>
Chaos1<S> coeffs_from_values(const std::vector<S>& vals) {
  Chaos1<S> out;
  out.coeffs.reserve(vals.size());
  S weighted = scalar_traits<S>::zero();  // sum_{j<k} 2^{k-j-1} v_j
  for (std::size_t k = 0; k < vals.size(); ++k) {
    out.coeffs.push_back(-vals[k] - weighted);
    weighted = scalar_traits<S>::scale_pow2(weighted, 1) + vals[k];
  }
  return out;
}

// v_k = -c_k + sum_{j<k} c_j
template <class S>
std::vector<S> values_from_coeffs(const Chaos1<S>& c, std::size_t count) {
  std::vector<S> out;
  out.reserve(count);
  S prefix = scalar_traits<S>::zero();
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(prefix - c.coeff(k));
    prefix += c.coeff(k);
  }
  return out;
}

// sum_{k<m} c_k h_{2^k} represented at level m
template <class S>
DyadicStep<S> truncate_to_step(const Chaos1<S>& c, int m) {
  if (m < 1) throw error("truncate_to_step requires level >= 1");
  DyadicStep<S>::check_level(m);
  DyadicStep<S> out = DyadicStep<S>::zero(m);
  S prefix = scalar_traits<S>::zero();
  for (int k = 0; k < m; ++k) {
    const S v = prefix - c.coeff(k);  // value on (2^{-k-1}, 2^{-k}]
    const std::size_t lo = std::size_t{1} << (m - k - 1);
    const std::size_t hi = std::size_t{1} << (m - k);
    for (std::size_t j = lo; j < hi; ++j) out.values[j] = v;
    prefix += c.coeff(k);
  }
  out.values[0] = prefix;  // value on (0, 2^-m]
  return out;
}

// ---- dual function -----------------------------------------------------

// coefficients of 1/f-hat: c_0 d_0 = 1, sum_{j<=k} c_{k-j} d_j = 0
template <class S>
DualCoeffs<S> dual_coeffs(const Chaos1<S>& c, std::size_t depth_n) {
  if (scalar_traits<S>::is_zero(c.coeff(0)))
    throw error("symbol vanishes at origin; dual undefined");
  DualCoeffs<S> d;
  d.coeffs.resize(depth_n + 1);
  const S c0 = c.coeff(0);
  d.coeffs[0] = scalar_traits<S>::one() / c0;
  for (std::size_t k = 1; k <= depth_n; ++k) {
    S s = scalar_traits<S>::zero();
    for (std::size_t j = 0; j < k; ++j) s += c.coeff(k - j) * d.coeffs[j];
    d.coeffs[k] = -(s / c0);
  }
  return d;
}

// ---- biorthogonal system ------------------------------------------------

// g^alpha = sum_{j<=k_s} d_j 2^{|alpha|-j} V^{alpha_j} h where alpha_j is
// alpha with its trailing zero run shortened by j
template <class S>
HaarCoeffMap<S> biorthogonal_g_map(const MultiIndex& alpha, const DualCoeffs<S>& dual) {
  GapVector g = multi_to_gaps(alpha);
  const std::uint32_t ks = g.gaps.back();
  if (dual.coeffs.size() <= ks) throw error("insufficient dual depth for this index");
  HaarCoeffMap<S> out;
  const int len = alpha.length();
  for (std::uint32_t j = 0; j <= ks; ++j) {
    GapVector gj = g;
    gj.gaps.back() = ks - j;
    const S w = scalar_traits<S>::scale_pow2(dual.coeffs[j], len - static_cast<long>(j));
    const MultiIndex aj = gaps_to_multi(gj);
    auto [it, inserted] = out.emplace(aj, w);
    if (!inserted) it->second += w;
  }
  return out;
}

template <class S>
DyadicStep<S> biorthogonal_g(const MultiIndex& alpha, const DualCoeffs<S>& dual, int level) {
  if (level < alpha.length() + 1) throw capacity_error("level too small for biorthogonal function");
  return to_step(biorthogonal_g_map(alpha, dual), level);
}

// ---- the commutant operator T_f and its adjoint -------------------------

// T_f (sum xi_alpha V^alpha h) = sum xi_alpha V^alpha f, with f cut at
// `depth` coefficients inside every translate
template <class S>
HaarCoeffMap<S> apply_Tf(const Chaos1<S>& c, const HaarCoeffMap<S>& x, int depth) {
  HaarCoeffMap<S> out;
  const std::size_t kmax = std::min<std::size_t>(depth, c.depth());
  for (const auto& [alpha, xi] : x) {
    if (alpha.length() + static_cast<int>(kmax) - 1 > MultiIndex::kMaxLen)
      throw capacity_error("apply_Tf: truncation depth exceeds index capacity");
    for (std::size_t k = 0; k < kmax; ++k) {
      if (scalar_traits<S>::is_zero(c.coeffs[k])) continue;
      const MultiIndex target(alpha.code << k);  // alpha followed by k zeros
      const S w = xi * c.coeffs[k];
      auto [it, inserted] = out.emplace(target, w);
      if (!inserted) it->second += w;
    }
  }
  map_prune_zeros(out);
  return out;
}

template <class S>
DyadicStep<S> apply_Tf_step(const Chaos1<S>& c, const DyadicStep<S>& x, int depth) {
  const HaarCoeffMap<S> out = apply_Tf(c, fourier_haar(x), depth);
  int lvl = 1;
  for (const auto& [alpha, xi] : out) lvl = std::max(lvl, alpha.length() + 1);
  return to_step(out, lvl);
}

// coefficient of T_f* y at alpha equals sum_j c_j eta(alpha 0_j) / 2^j;
// this is the adjoint for the bilinear pairing (u,v) = int u v
template <class S>
HaarCoeffMap<S> apply_Tf_adjoint(const Chaos1<S>& c, const HaarCoeffMap<S>& y) {
  HaarCoeffMap<S> out;
  for (const auto& [beta, eta] : y) {
    const int tz = beta.trailing_zeros();
    const int jmax = std::min<int>(tz, static_cast<int>(c.depth()) - 1);
    for (int j = 0; j <= jmax; ++j) {
      if (scalar_traits<S>::is_zero(c.coeffs[j])) continue;
      const MultiIndex alpha = beta.drop_tail(j);
      const S w = scalar_traits<S>::scale_pow2(c.coeffs[j] * eta, -j);
      auto [it, inserted] = out.emplace(alpha, w);
      if (!inserted) it->second += w;
    }
  }
  map_prune_zeros(out);
  return out;
}

// T_f on a chaos of order d acts as convolution with (c_k) along the last
// gap variable
template <class S>
ChaosD<S> apply_Tf_chaosd(const Chaos1<S>& c, const ChaosD<S>& x, int depth) {
  ChaosD<S> out;
  out.order = x.order;
  const std::size_t kmax = std::min<std::size_t>(depth, c.depth());
  for (const auto& [g, xi] : x.coeffs) {
    for (std::size_t k = 0; k < kmax; ++k) {
      if (scalar_traits<S>::is_zero(c.coeffs[k])) continue;
      GapVector tg = g;
      tg.gaps.back() += static_cast<std::uint32_t>(k);
      const S w = xi * c.coeffs[k];
      auto [it, inserted] = out.coeffs.emplace(tg, w);
      if (!inserted) it->second += w;
    }
  }
  for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
    it = scalar_traits<S>::is_zero(it->second) ? out.coeffs.erase(it) : std::next(it);
  return out;
}

// ---- chaos decomposition ------------------------------------------------

template <class S>
ChaosD<S> map_to_chaosd(int order, const HaarCoeffMap<S>& m) {
  ChaosD<S> out;
  out.order = order;
  for (const auto& [alpha, xi] : m) out.coeffs.emplace(multi_to_gaps(alpha), xi);
  return out;
}

template <class S>
HaarCoeffMap<S> chaosd_to_map(const ChaosD<S>& x) {
  HaarCoeffMap<S> out;
  for (const auto& [g, xi] : x.coeffs) out.emplace(gaps_to_multi(g), xi);
  return out;
}

// split x into its order-d components (grouping Haar indices by the number
// of ones in their binary expansion)
template <class S>
std::vector<ChaosD<S>> decompose_chaoses(const DyadicStep<S>& x) {
  const HaarCoeffMap<S> coeffs = fourier_haar(x);
  int dmax = 0;
  for (const auto& [alpha, xi] : coeffs) dmax = std::max(dmax, alpha.ones() + 1);
  std::vector<ChaosD<S>> out(static_cast<std::size_t>(dmax));
  for (int d = 1; d <= dmax; ++d) out[d - 1].order = d;
  for (const auto& [alpha, xi] : coeffs)
    out[alpha.ones()].coeffs.emplace(multi_to_gaps(alpha), xi);
  return out;
}

// ---- the special function x0 --------------------------------------------

// indices (0_{k1},1,...,1,0_{ks}) with k_1,...,k_{s-1} < n and k_s = n,
// every |alpha| <= max_len, ordered by |alpha| then code
std::vector<MultiIndex> x0_indices(int n, int max_len);

template <class S>
HaarCoeffMap<S> x0_coeff_map(int n, int max_len) {
  HaarCoeffMap<S> out;
  for (const MultiIndex& alpha : x0_indices(n, max_len))
    out.emplace(alpha, scalar_traits<S>::one());
  return out;
}

template <class S>
DyadicStep<S> x0_construct(int n, int max_len) {
  const std::vector<MultiIndex> idx = x0_indices(n, max_len);
  if (!pairwise_disjoint(idx)) throw error("x0 construction produced overlapping supports");
  int lvl = 1;
  for (const MultiIndex& alpha : idx) lvl = std::max(lvl, alpha.length() + 1);
  HaarCoeffMap<S> m;
  for (const MultiIndex& alpha : idx) m.emplace(alpha, scalar_traits<S>::one());
  return to_step(m, lvl);
}

// ---- affine Walsh system ------------------------------------------------

// W^alpha f = sum_{|beta|=|alpha|} (-1)^{(alpha,beta)} V^beta f, with f cut
// at `depth` coefficients
template <class S>
DyadicStep<S> walsh_affine(const MultiIndex& alpha, const Chaos1<S>& c, int depth) {
  const int k = alpha.length();
  if (k > 12) throw capacity_error("walsh_affine limited to |alpha| <= 12");
  const DyadicStep<S> f = truncate_to_step(c, depth);
  DyadicStep<S> out = DyadicStep<S>::zero(k + f.level);
  const std::uint64_t apos = alpha.position();
  for (std::uint64_t bpos = 0; bpos < (std::uint64_t{1} << k); ++bpos) {
    const bool neg = (std::popcount(apos & bpos) & 1) != 0;
    const std::size_t off = static_cast<std::size_t>(bpos) << f.level;
    for (std::size_t j = 0; j < f.cells(); ++j) {
      if (neg)
        out.values[off + j] -= f.values[j];
      else
        out.values[off + j] += f.values[j];
    }
  }
  return out;
}

// ---- sparse Lp norm of a Haar expansion ----------------------------------

// Lp norm of sum xi_alpha V^alpha h evaluated by walking the support tree;
// the function is constant below the deepest supported index on each branch.
template <class S>
NormReport sparse_lp_norm(const HaarCoeffMap<S>& coeffs, double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw error("sparse_lp_norm requires finite p >= 1");
  std::set<std::uint64_t> internal;
  for (const auto& [alpha, xi] : coeffs) {
    std::uint64_t code = alpha.code;
    while (code >= 1) {
      internal.insert(code);
      if (code == 1) break;
      code >>= 1;
    }
  }
  NormReport r;
  r.mode = scalar_traits<S>::exact ? "exact" : "float";
  r.method = "lp-sparse-tree";
  const bool even_int = p == std::floor(p) && std::fmod(p, 2.0) == 0.0;
  const long half_p = even_int ? std::lround(p) / 2 : 0;

  struct Frame {
    std::uint64_t code;
    S acc;
  };
  std::vector<Frame> stack;
  stack.push_back({1, scalar_traits<S>::zero()});
  Rat exact_sum(0);
  double float_sum = 0.0;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (!internal.contains(f.code)) {
      const int len = MultiIndex(f.code).length();
      if constexpr (scalar_traits<S>::exact) {
        if (even_int) {
          Rat a = abs_sq(f.acc);
          Rat t(1);
          for (long i = 0; i < half_p; ++i) t *= a;
          mpq_div_2exp(t.get_mpq_t(), t.get_mpq_t(), len);
          exact_sum += t;
          continue;
        }
      }
      const double a = std::abs(scalar_traits<S>::to_cd(f.acc));
      float_sum += std::ldexp(std::pow(a, p), -len);
      continue;
    }
    auto it = coeffs.find(MultiIndex(f.code));
    const S xi = it == coeffs.end() ? scalar_traits<S>::zero() : it->second;
    stack.push_back({f.code << 1, f.acc + xi});
    stack.push_back({(f.code << 1) | 1, f.acc - xi});
  }
  if (scalar_traits<S>::exact && even_int) {
    r.exact_sq = rat_to_string(exact_sum);
    r.value = std::pow(exact_sum.get_d(), 1.0 / p);
  } else {
    r.value = std::pow(float_sum, 1.0 / p);
  }
  return r;
}

// ---- reconstruction in chaoses -------------------------------------------

template <class S>
struct ReconstructionReport {
  HaarCoeffMap<S> partial;
  std::vector<std::pair<double, NormReport>> errors;  // (p, ||x - partial||_p)
  std::uint64_t n_max = 0;
  int depth = 0;
};

// (x, g^alpha) = sum_{j<=k_s} d_j xi_x(alpha_j): the 2^{|alpha|-j} weight of
// g^alpha cancels against the 2^{-|alpha_j|} of the pairing
template <class S>
S reconstruction_coefficient(const HaarCoeffMap<S>& x, const MultiIndex& alpha,
                             const DualCoeffs<S>& dual) {
  GapVector g = multi_to_gaps(alpha);
  const std::uint32_t ks = g.gaps.back();
  if (dual.coeffs.size() <= ks) throw error("insufficient dual depth for this index");
  S s = scalar_traits<S>::zero();
  for (std::uint32_t j = 0; j <= ks; ++j) {
    GapVector gj = g;
    gj.gaps.back() = ks - j;
    auto it = x.find(gaps_to_multi(gj));
    if (it != x.end()) s += dual.coeffs[j] * it->second;
  }
  return s;
}

// partial sum over 1 <= n <= n_max of (x, g^n) f_n with f cut at `depth`
template <class S>
ReconstructionReport<S> reconstruct_in_chaoses(const Chaos1<S>& c, const DyadicStep<S>& x,
                                               std::uint64_t n_max, int depth,
                                               const std::vector<double>& p_list) {
  detail::require_mean_zero(x, "reconstruct_in_chaoses");
  const HaarCoeffMap<S> xmap = fourier_haar(x);
  std::uint32_t max_gap = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n)
    max_gap = std::max(max_gap, nd_to_gaps(n).gaps.back());
  const DualCoeffs<S> dual = dual_coeffs(c, max_gap);

  ReconstructionReport<S> rep;
  rep.n_max = n_max;
  rep.depth = depth;
  const std::size_t kmax = std::min<std::size_t>(depth, c.depth());
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const MultiIndex alpha = index_to_multi(n);
    const S coef = reconstruction_coefficient(xmap, alpha, dual);
    if (scalar_traits<S>::is_zero(coef)) continue;
    if (alpha.length() + static_cast<int>(kmax) - 1 > MultiIndex::kMaxLen)
      throw capacity_error("reconstruct: depth exceeds index capacity");
    for (std::size_t k = 0; k < kmax; ++k) {
      if (scalar_traits<S>::is_zero(c.coeffs[k])) continue;
      const MultiIndex target(alpha.code << k);
      const S w = coef * c.coeffs[k];
      auto [it, inserted] = rep.partial.emplace(target, w);
      if (!inserted) it->second += w;
    }
  }
  map_prune_zeros(rep.partial);

  HaarCoeffMap<S> err = rep.partial;
  for (auto& [alpha, xi] : err) xi = -xi;
  map_add_scaled(err, xmap, scalar_traits<S>::one());
  map_prune_zeros(err);
  for (double p : p_list) {
    if (p == 2.0) {
      const auto sq = parseval_norm_sq(err);
      NormReport r;
      r.value = std::sqrt(scalar_traits<S>::real_to_double(sq));
      r.method = "l2-parseval";
      r.mode = scalar_traits<S>::exact ? "exact" : "float";
      if constexpr (scalar_traits<S>::exact) r.exact_sq = rat_to_string(sq);
      rep.errors.emplace_back(p, std::move(r));
    } else {
      rep.errors.emplace_back(p, sparse_lp_norm(err, p));
    }
  }
  return rep;
}

// ---- closed-form BMO of a first-order chaos -------------------------------

// max over 0 <= i < m of sum_{0 <= j < m-i} |c_{i+j}|^2 2^{-j}, squared form
template <class S>
typename scalar_traits<S>::real_type bmo_chaos1_sq(const Chaos1<S>& c, int m) {
  auto best = scalar_traits<S>::real_zero();
  for (int i = 0; i < m; ++i) {
    auto s = scalar_traits<S>::real_zero();
    for (int j = 0; i + j < m; ++j) {
      auto t = abs_sq(c.coeff(i + j));
      if constexpr (scalar_traits<S>::exact) {
        mpq_div_2exp(t.get_mpq_t(), t.get_mpq_t(), j);
        s += t;
      } else {
        s += std::ldexp(t, -j);
      }
    }
    if (s > best) best = s;
  }
  return best;
}

template <class S>
NormReport bmo_chaos1(const Chaos1<S>& c, int m) {
  const auto sq = bmo_chaos1_sq(c, m);
  NormReport r;
  r.value = std::sqrt(scalar_traits<S>::real_to_double(sq));
  r.method = "bmo-chaos1-closed-form";
  r.mode = scalar_traits<S>::exact ? "exact" : "float";
  r.truncation["m"] = m;
  if constexpr (scalar_traits<S>::exact) r.exact_sq = rat_to_string(sq);
  return r;
}

}  // namespace haffine
