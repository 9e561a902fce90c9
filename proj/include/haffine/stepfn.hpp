#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "haffine/dyadic.hpp"
#include "haffine/kernels.hpp"
#include "haffine/report.hpp"
#include "haffine/scalar.hpp"

namespace haffine {

// A function on (0,1] constant on the 2^m dyadic cells of level m;
// values[j] is the value on (j/2^m, (j+1)/2^m].
template <class S>
struct DyadicStep {
  int level = 0;
  std::vector<S> values;

  DyadicStep() : values(1, scalar_traits<S>::zero()) {}
  DyadicStep(int lvl, std::vector<S> vals) : level(lvl), values(std::move(vals)) {}

  static DyadicStep zero(int lvl) {
    check_level(lvl);
    return DyadicStep(lvl, std::vector<S>(std::size_t{1} << lvl, scalar_traits<S>::zero()));
  }
  std::size_t cells() const { return values.size(); }

  static constexpr int max_level() { return scalar_traits<S>::exact ? 21 : 26; }
  static void check_level(int lvl) {
    if (lvl < 0) throw error("negative level");
    if (lvl > max_level()) throw capacity_error("dyadic step level exceeds capacity");
  }
};

using StepQ = DyadicStep<CplxQ>;
using StepD = DyadicStep<CD>;

template <class S>
using HaarCoeffMap = std::map<MultiIndex, S>;

// ---- construction -----------------------------------------------------

// h = +1 on (0,1/2], -1 on (1/2,1]
template <class S>
DyadicStep<S> haar_mother(int level = 1) {
  DyadicStep<S> x = DyadicStep<S>::zero(std::max(level, 1));
  const std::size_t half = x.cells() / 2;
  for (std::size_t j = 0; j < x.cells(); ++j)
    x.values[j] = j < half ? scalar_traits<S>::one() : scalar_traits<S>::from_int(-1);
  return x;
}

template <class S>
DyadicStep<S> refine(const DyadicStep<S>& x, int level) {
  if (level < x.level) throw error("refine cannot coarsen");
  DyadicStep<S>::check_level(level);
  if (level == x.level) return x;
  const int shift = level - x.level;
  DyadicStep<S> out(level, std::vector<S>(std::size_t{1} << level));
  for (std::size_t j = 0; j < out.cells(); ++j) out.values[j] = x.values[j >> shift];
  return out;
}

// V_b: squeeze into the half (b=0 left, b=1 right), zero elsewhere
template <class S>
DyadicStep<S> dilate(int b, const DyadicStep<S>& x) {
  DyadicStep<S>::check_level(x.level + 1);
  DyadicStep<S> out = DyadicStep<S>::zero(x.level + 1);
  const std::size_t off = b ? x.cells() : 0;
  for (std::size_t j = 0; j < x.cells(); ++j) out.values[off + j] = x.values[j];
  return out;
}

// V^alpha: squeeze into I_alpha
template <class S>
DyadicStep<S> apply_multi(const MultiIndex& alpha, const DyadicStep<S>& x) {
  const int k = alpha.length();
  DyadicStep<S>::check_level(x.level + k);
  DyadicStep<S> out = DyadicStep<S>::zero(x.level + k);
  const std::size_t off = static_cast<std::size_t>(alpha.position()) << x.level;
  for (std::size_t j = 0; j < x.cells(); ++j) out.values[off + j] = x.values[j];
  return out;
}

// h_n = V^alpha h where alpha is the binary address of n
template <class S>
DyadicStep<S> haar(std::uint64_t n, int level) {
  const MultiIndex alpha = index_to_multi(n);
  if (level < alpha.length() + 1) throw capacity_error("level too small for this Haar function");
  return refine(apply_multi(alpha, haar_mother<S>()), level);
}

// ---- linear ops -------------------------------------------------------

template <class S>
DyadicStep<S> add(const DyadicStep<S>& x, const DyadicStep<S>& y) {
  const int lvl = std::max(x.level, y.level);
  DyadicStep<S> a = refine(x, lvl), b = refine(y, lvl);
  for (std::size_t j = 0; j < a.cells(); ++j) a.values[j] += b.values[j];
  return a;
}

template <class S>
DyadicStep<S> sub(const DyadicStep<S>& x, const DyadicStep<S>& y) {
  const int lvl = std::max(x.level, y.level);
  DyadicStep<S> a = refine(x, lvl), b = refine(y, lvl);
  for (std::size_t j = 0; j < a.cells(); ++j) a.values[j] -= b.values[j];
  return a;
}

template <class S>
DyadicStep<S> scale(const S& c, DyadicStep<S> x) {
  for (auto& v : x.values) v *= c;
  return x;
}

template <class S>
S mean(const DyadicStep<S>& x) {
  S s = scalar_traits<S>::zero();
  for (const auto& v : x.values) s += v;
  return scalar_traits<S>::scale_pow2(s, -x.level);
}

// bilinear pairing (x,y) = int x*y (no conjugation)
template <class S>
S inner(const DyadicStep<S>& x, const DyadicStep<S>& y) {
  const int lvl = std::max(x.level, y.level);
  DyadicStep<S> a = refine(x, lvl), b = refine(y, lvl);
  S s = scalar_traits<S>::zero();
  for (std::size_t j = 0; j < a.cells(); ++j) s += a.values[j] * b.values[j];
  return scalar_traits<S>::scale_pow2(s, -lvl);
}

// sesquilinear pairing <x,y> = int x * conj(y)
template <class S>
S inner_herm(const DyadicStep<S>& x, const DyadicStep<S>& y) {
  const int lvl = std::max(x.level, y.level);
  DyadicStep<S> a = refine(x, lvl), b = refine(y, lvl);
  S s = scalar_traits<S>::zero();
  for (std::size_t j = 0; j < a.cells(); ++j) s += a.values[j] * scalar_traits<S>::conj(b.values[j]);
  return scalar_traits<S>::scale_pow2(s, -lvl);
}

template <class S>
typename scalar_traits<S>::real_type l2_norm_sq(const DyadicStep<S>& x) {
  auto s = scalar_traits<S>::real_zero();
  for (const auto& v : x.values) s += abs_sq(v);
  using T = scalar_traits<S>;
  if constexpr (T::exact) {
    Rat r = s;
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), x.level);
    return r;
  } else {
    return std::ldexp(s, -x.level);
  }
}

// ---- scaled adjoint, oscillation norms ---------------------------------

// 2^{|alpha|} V^{alpha*} x: the restriction of x to I_alpha stretched to
// (0,1] with its mean removed. Requires level(x) >= |alpha|.
template <class S>
DyadicStep<S> adjoint_scaled(const MultiIndex& alpha, const DyadicStep<S>& x) {
  const int k = alpha.length();
  if (k > x.level) throw error("adjoint_scaled: index deeper than step resolution");
  const int m = x.level - k;
  DyadicStep<S> out(m, std::vector<S>(std::size_t{1} << m));
  const std::size_t off = static_cast<std::size_t>(alpha.position()) << m;
  for (std::size_t j = 0; j < out.cells(); ++j) out.values[j] = x.values[off + j];
  const S mu = mean(out);
  for (auto& v : out.values) v -= mu;
  return out;
}

namespace detail {
template <class S>
void require_mean_zero(const DyadicStep<S>& x, const char* what) {
  const S mu = mean(x);
  if constexpr (scalar_traits<S>::exact) {
    if (!scalar_traits<S>::is_zero(mu))
      throw error(std::string(what) + ": nonzero mean " + rat_to_string(mu.re) +
                  (mu.im == 0 ? "" : "+" + rat_to_string(mu.im) + "i"));
  } else {
    if (std::abs(scalar_traits<S>::to_cd(mu)) > 1e-12)
      throw error(std::string(what) + ": nonzero mean " + std::to_string(mu.real()));
  }
}
}  // namespace detail

// sup over all alpha of || 2^{|alpha|} V^{alpha*} x ||_{L2}, squared.
// A level-m step restricted below its own resolution is constant, so the
// finite sup over |alpha| < m is the exact value.
template <class S>
typename scalar_traits<S>::real_type bmo_norm_sq(const DyadicStep<S>& x) {
  detail::require_mean_zero(x, "bmo_norm");
  auto best = scalar_traits<S>::real_zero();
  for (int k = 0; k < std::max(x.level, 1); ++k) {
    const std::uint64_t count = std::uint64_t{1} << k;
    for (std::uint64_t j = 0; j < count; ++j) {
      const MultiIndex alpha((std::uint64_t{1} << k) | j);
      const auto v = l2_norm_sq(adjoint_scaled(alpha, x));
      if (v > best) best = v;
    }
  }
  return best;
}

template <class S>
NormReport bmo_norm(const DyadicStep<S>& x) {
  const auto sq = bmo_norm_sq(x);
  NormReport r;
  r.value = std::sqrt(scalar_traits<S>::real_to_double(sq));
  r.method = "bmo-sup-localized-l2";
  r.mode = scalar_traits<S>::exact ? "exact" : "float";
  r.truncation["level"] = x.level;
  if constexpr (scalar_traits<S>::exact) r.exact_sq = rat_to_string(sq);
  return r;
}

// pointwise sup over dyadic ancestors of the localized L2 oscillation,
// squared; exact in exact mode
template <class S>
DyadicStep<S> sharp_sq(const DyadicStep<S>& x) {
  detail::require_mean_zero(x, "sharp");
  const int m = std::max(x.level, 1);
  std::vector<typename scalar_traits<S>::real_type> best(
      std::size_t{1} << m, scalar_traits<S>::real_zero());
  for (int k = 0; k < m; ++k) {
    const std::uint64_t count = std::uint64_t{1} << k;
    for (std::uint64_t j = 0; j < count; ++j) {
      const MultiIndex alpha((std::uint64_t{1} << k) | j);
      const auto v = l2_norm_sq(adjoint_scaled(alpha, refine(x, m)));
      const std::size_t lo = static_cast<std::size_t>(j) << (m - k);
      const std::size_t hi = lo + (std::size_t{1} << (m - k));
      for (std::size_t c = lo; c < hi; ++c)
        if (v > best[c]) best[c] = v;
    }
  }
  DyadicStep<S> out(m, std::vector<S>(std::size_t{1} << m));
  for (std::size_t c = 0; c < out.cells(); ++c) {
    if constexpr (scalar_traits<S>::exact)
      out.values[c] = CplxQ(best[c]);
    else
      out.values[c] = CD{best[c], 0.0};
  }
  return out;
}

template <class S>
StepD sharp(const DyadicStep<S>& x) {
  const DyadicStep<S> sq = sharp_sq(x);
  StepD out(sq.level, std::vector<CD>(sq.cells()));
  for (std::size_t c = 0; c < sq.cells(); ++c)
    out.values[c] = CD{std::sqrt(scalar_traits<S>::to_cd(sq.values[c]).real()), 0.0};
  return out;
}

// ---- Fourier-Haar analysis ---------------------------------------------

// xi_alpha = 2^{|alpha|} (x, V^alpha h) for all |alpha| < level; requires
// mean zero so that x = sum xi_alpha V^alpha h exactly
template <class S>
HaarCoeffMap<S> fourier_haar(const DyadicStep<S>& x) {
  detail::require_mean_zero(x, "fourier_haar");
  HaarCoeffMap<S> out;
  // cell averages level by level, bottom-up; xi_alpha = (avg_left - avg_right)/2
  std::vector<S> avg = x.values;
  for (int k = x.level - 1; k >= 0; --k) {
    std::vector<S> up(std::size_t{1} << k);
    for (std::size_t j = 0; j < up.size(); ++j) {
      const S& a = avg[2 * j];
      const S& b = avg[2 * j + 1];
      const S coeff = scalar_traits<S>::half(a - b);
      if (!scalar_traits<S>::is_zero(coeff)) out.emplace(MultiIndex((std::uint64_t{1} << k) | j), coeff);
      up[j] = scalar_traits<S>::half(a + b);
    }
    avg = std::move(up);
  }
  return out;
}

template <class S>
DyadicStep<S> to_step(const HaarCoeffMap<S>& coeffs, int level) {
  DyadicStep<S>::check_level(level);
  for (const auto& [alpha, xi] : coeffs)
    if (alpha.length() >= level)
      throw capacity_error("to_step: coefficient index deeper than requested level");
  DyadicStep<S> out = DyadicStep<S>::zero(level);
  // accumulate signed prefix sums down the tree
  struct Frame {
    std::uint64_t code;
    S acc;
  };
  std::vector<Frame> stack;
  stack.push_back({1, scalar_traits<S>::zero()});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const int len = MultiIndex(f.code).length();
    if (len == level) {
      out.values[f.code - (std::uint64_t{1} << level)] = f.acc;
      continue;
    }
    auto it = coeffs.find(MultiIndex(f.code));
    const S xi = it == coeffs.end() ? scalar_traits<S>::zero() : it->second;
    stack.push_back({f.code << 1, f.acc + xi});
    stack.push_back({(f.code << 1) | 1, f.acc - xi});
  }
  return out;
}

// Parseval: ||x||_2^2 = sum |xi_alpha|^2 2^{-|alpha|}
template <class S>
typename scalar_traits<S>::real_type parseval_norm_sq(const HaarCoeffMap<S>& coeffs) {
  auto s = scalar_traits<S>::real_zero();
  for (const auto& [alpha, xi] : coeffs) {
    auto t = abs_sq(xi);
    if constexpr (scalar_traits<S>::exact) {
      mpq_div_2exp(t.get_mpq_t(), t.get_mpq_t(), alpha.length());
      s += t;
    } else {
      s += std::ldexp(t, -alpha.length());
    }
  }
  return s;
}

// (x, y) = sum xi_alpha eta_alpha 2^{-|alpha|}  (bilinear)
template <class S>
S bilinear_pair(const HaarCoeffMap<S>& x, const HaarCoeffMap<S>& y) {
  S s = scalar_traits<S>::zero();
  const auto& small = x.size() <= y.size() ? x : y;
  const auto& large = x.size() <= y.size() ? y : x;
  for (const auto& [alpha, xi] : small) {
    auto it = large.find(alpha);
    if (it != large.end()) s += scalar_traits<S>::scale_pow2(xi * it->second, -alpha.length());
  }
  return s;
}

template <class S>
HaarCoeffMap<S>& map_add_scaled(HaarCoeffMap<S>& dst, const HaarCoeffMap<S>& src, const S& c) {
  for (const auto& [alpha, xi] : src) {
    auto [it, inserted] = dst.emplace(alpha, xi * c);
    if (!inserted) it->second += xi * c;
  }
  return dst;
}

template <class S>
void map_prune_zeros(HaarCoeffMap<S>& m) {
  for (auto it = m.begin(); it != m.end();)
    it = scalar_traits<S>::is_zero(it->second) ? m.erase(it) : std::next(it);
}

// ---- Lp norms -----------------------------------------------------------

template <class S>
std::vector<CD> to_cd_values(const DyadicStep<S>& x) {
  std::vector<CD> out(x.cells());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = scalar_traits<S>::to_cd(x.values[j]);
  return out;
}

template <class S>
NormReport lp_norm(const DyadicStep<S>& x, double p) {
  if (!(p >= 1.0) && !std::isinf(p)) throw error("lp_norm requires p >= 1");
  NormReport r;
  r.mode = scalar_traits<S>::exact ? "exact" : "float";
  r.truncation["level"] = x.level;
  const std::vector<CD> vals = to_cd_values(x);
  if (std::isinf(p)) {
    r.method = "linf-max-cell";
    if constexpr (scalar_traits<S>::exact) {
      Rat best(0);
      for (const auto& v : x.values) {
        Rat a = abs_sq(v);
        if (a > best) best = a;
      }
      r.exact_sq = rat_to_string(best);
      r.value = std::sqrt(best.get_d());
    } else {
      r.value = std::sqrt(kern::max_abs_sq(vals.data(), vals.size()));
    }
    return r;
  }
  const bool even_int = p == std::floor(p) && std::fmod(p, 2.0) == 0.0;
  if (scalar_traits<S>::exact && even_int) {
    // exact p-th power of the norm for even integer p
    if constexpr (scalar_traits<S>::exact) {
      const long half_p = std::lround(p) / 2;
      Rat s(0);
      for (const auto& v : x.values) {
        Rat a = abs_sq(v);
        Rat t(1);
        for (long i = 0; i < half_p; ++i) t *= a;
        s += t;
      }
      mpq_div_2exp(s.get_mpq_t(), s.get_mpq_t(), x.level);
      r.exact_sq = rat_to_string(s);
      r.value = std::pow(s.get_d(), 1.0 / p);
      r.method = "lp-exact-even";
      return r;
    }
  }
  double s;
  if (p == 2.0)
    s = kern::sum_abs_sq(vals.data(), vals.size());
  else
    s = kern::sum_abs_pow(vals.data(), vals.size(), p);
  r.value = std::pow(std::ldexp(s, -x.level), 1.0 / p);
  r.method = "lp-cellwise";
  if (!scalar_traits<S>::exact) r.note = "float accumulation; fixed cell order";
  return r;
}

// ---- Paley function and the H1 norm ------------------------------------

// cellwise sum of |xi|^2 along each cell's ancestor chain (squared Paley
// function); exact in exact mode
template <class S>
DyadicStep<S> paley_sq(const DyadicStep<S>& x) {
  const HaarCoeffMap<S> coeffs = fourier_haar(x);
  const int m = std::max(x.level, 1);
  DyadicStep<S> out = DyadicStep<S>::zero(m);
  struct Frame {
    std::uint64_t code;
    typename scalar_traits<S>::real_type acc;
  };
  std::vector<Frame> stack;
  stack.push_back({1, scalar_traits<S>::real_zero()});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const int len = MultiIndex(f.code).length();
    if (len == m) {
      if constexpr (scalar_traits<S>::exact)
        out.values[f.code - (std::uint64_t{1} << m)] = CplxQ(f.acc);
      else
        out.values[f.code - (std::uint64_t{1} << m)] = CD{f.acc, 0.0};
      continue;
    }
    auto it = coeffs.find(MultiIndex(f.code));
    auto acc = f.acc;
    if (it != coeffs.end()) acc += abs_sq(it->second);
    stack.push_back({f.code << 1, acc});
    stack.push_back({(f.code << 1) | 1, acc});
  }
  return out;
}

template <class S>
StepD paley(const DyadicStep<S>& x) {
  const DyadicStep<S> sq = paley_sq(x);
  StepD out(sq.level, std::vector<CD>(sq.cells()));
  for (std::size_t c = 0; c < sq.cells(); ++c)
    out.values[c] = CD{std::sqrt(scalar_traits<S>::to_cd(sq.values[c]).real()), 0.0};
  return out;
}

template <class S>
NormReport h1_norm(const DyadicStep<S>& x) {
  const StepD px = paley(x);
  double s = 0.0;
  for (const auto& v : px.values) s += v.real();
  NormReport r;
  r.value = std::ldexp(s, -px.level);
  r.method = "paley-l1";
  r.mode = "float";
  r.truncation["level"] = x.level;
  r.note =
      "square roots in float; squared path sums exact in exact mode; "
      "atomic-decomposition norm not computed";
  return r;
}

// ---- averaging projection onto first-order chaoses ---------------------

// Replace x on each (2^-k-1, 2^-k] by its average there; the deepest cell
// (0, 2^-m] is already a single cell and is kept.
template <class S>
DyadicStep<S> project_chaos1(const DyadicStep<S>& x) {
  DyadicStep<S> out = x;
  const int m = x.level;
  for (int k = 0; k < m; ++k) {
    // cells of (2^{-k-1}, 2^{-k}]: indices [2^{m-k-1}, 2^{m-k})
    const std::size_t lo = std::size_t{1} << (m - k - 1);
    const std::size_t hi = std::size_t{1} << (m - k);
    S s = scalar_traits<S>::zero();
    for (std::size_t j = lo; j < hi; ++j) s += x.values[j];
    const S avg = scalar_traits<S>::scale_pow2(s, -(m - k - 1));
    for (std::size_t j = lo; j < hi; ++j) out.values[j] = avg;
  }
  return out;
}

}  // namespace haffine
