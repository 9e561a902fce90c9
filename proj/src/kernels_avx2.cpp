// AVX2 variants of the complex kernels. Two interleaved complex doubles per
// 256-bit lane; compiled with -mavx2 -mfma and reached only through the
// runtime dispatch in kernels.cpp.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "haffine/kernels.hpp"

namespace haffine::kern::avx2 {

namespace {

// [ar,ai,br,bi] * [cr,ci,dr,di] -> [ac, bd] complex products
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);         // [ar,ar,br,br]
  const __m256d a_im = _mm256_permute_pd(a, 0xF);    // [ai,ai,bi,bi]
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);    // [ci,cr,di,dr]
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

inline __m256d broadcast_cd(CD s) {
  return _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&s));
}

}  // namespace

void poly_eval_many(const CD* coef, std::size_t nc, const CD* z, CD* out, std::size_t n) {
  if (nc == 0) {
    std::fill(out, out + n, CD{0.0, 0.0});
    return;
  }
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d z0 = _mm256_loadu_pd(reinterpret_cast<const double*>(z + i));
    const __m256d z1 = _mm256_loadu_pd(reinterpret_cast<const double*>(z + i + 2));
    __m256d w0 = broadcast_cd(coef[nc - 1]);
    __m256d w1 = w0;
    for (std::size_t k = nc - 1; k-- > 0;) {
      const __m256d ck = broadcast_cd(coef[k]);
      w0 = _mm256_add_pd(cmul(w0, z0), ck);
      w1 = _mm256_add_pd(cmul(w1, z1), ck);
    }
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), w0);
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i + 2), w1);
  }
  if (i < n) scalar::poly_eval_many(coef, nc, z + i, out + i, n - i);
}

void conv_lower(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n) {
  std::fill(y, y + n, CD{0.0, 0.0});
  const std::size_t jmax = std::min(nb, n);
  for (std::size_t j = 0; j < jmax; ++j) {
    const __m256d bj = broadcast_cd(b[j]);
    const CD bjs = b[j];
    std::size_t k = j;
    for (; k + 2 <= n; k += 2) {
      const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + k - j));
      __m256d yv = _mm256_loadu_pd(reinterpret_cast<double*>(y + k));
      yv = _mm256_add_pd(yv, cmul(bj, xv));
      _mm256_storeu_pd(reinterpret_cast<double*>(y + k), yv);
    }
    for (; k < n; ++k) y[k] += bjs * x[k - j];
  }
}

void corr_upper(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n) {
  std::fill(y, y + n, CD{0.0, 0.0});
  const std::size_t jmax = std::min(nb, n);
  for (std::size_t j = 0; j < jmax; ++j) {
    const CD bjs = std::conj(b[j]);
    const __m256d bj = broadcast_cd(bjs);
    const std::size_t kmax = n - j;
    std::size_t k = 0;
    for (; k + 2 <= kmax; k += 2) {
      const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + k + j));
      __m256d yv = _mm256_loadu_pd(reinterpret_cast<double*>(y + k));
      yv = _mm256_add_pd(yv, cmul(bj, xv));
      _mm256_storeu_pd(reinterpret_cast<double*>(y + k), yv);
    }
    for (; k < kmax; ++k) y[k] += bjs * x[k + j];
  }
}

double sum_abs_sq(const CD* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

double max_abs_sq(const CD* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d sq = _mm256_mul_pd(v, v);
    // re^2 + im^2 per complex element
    const __m256d sw = _mm256_permute_pd(sq, 0x5);
    acc = _mm256_max_pd(acc, _mm256_add_pd(sq, sw));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i)
    m = std::max(m, x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return m;
}

}  // namespace haffine::kern::avx2
