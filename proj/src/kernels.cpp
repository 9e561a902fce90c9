#include "haffine/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace haffine::kern {

namespace scalar {

void poly_eval_many(const CD* coef, std::size_t nc, const CD* z, CD* out, std::size_t n) {
  if (nc == 0) {
    std::fill(out, out + n, CD{0.0, 0.0});
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    CD w = coef[nc - 1];
    for (std::size_t k = nc - 1; k-- > 0;) w = w * z[i] + coef[k];
    out[i] = w;
  }
}

void conv_lower(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n) {
  std::fill(y, y + n, CD{0.0, 0.0});
  const std::size_t jmax = std::min(nb, n);
  for (std::size_t j = 0; j < jmax; ++j) {
    const CD bj = b[j];
    for (std::size_t k = j; k < n; ++k) y[k] += bj * x[k - j];
  }
}

void corr_upper(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n) {
  std::fill(y, y + n, CD{0.0, 0.0});
  const std::size_t jmax = std::min(nb, n);
  for (std::size_t j = 0; j < jmax; ++j) {
    const CD bj = std::conj(b[j]);
    for (std::size_t k = 0; k + j < n; ++k) y[k] += bj * x[k + j];
  }
}

double sum_abs_sq(const CD* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

double max_abs_sq(const CD* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    m = std::max(m, x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return m;
}

}  // namespace scalar

#if defined(HAFFINE_BUILD_AVX2)
namespace avx2 {
void poly_eval_many(const CD* coef, std::size_t nc, const CD* z, CD* out, std::size_t n);
void conv_lower(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n);
void corr_upper(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n);
double sum_abs_sq(const CD* x, std::size_t n);
double max_abs_sq(const CD* x, std::size_t n);
}  // namespace avx2
#endif

bool avx2_available() {
#if defined(HAFFINE_BUILD_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {
Backend g_backend = avx2_available() ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() { return g_backend; }

bool set_backend(const std::string& name) {
  if (name == "scalar") {
    g_backend = Backend::scalar;
    return true;
  }
  if (name == "avx2") {
    if (!avx2_available()) return false;
    g_backend = Backend::avx2;
    return true;
  }
  if (name == "auto") {
    g_backend = avx2_available() ? Backend::avx2 : Backend::scalar;
    return true;
  }
  return false;
}

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void poly_eval_many(const CD* coef, std::size_t nc, const CD* z, CD* out, std::size_t n) {
#if defined(HAFFINE_BUILD_AVX2)
  if (g_backend == Backend::avx2) return avx2::poly_eval_many(coef, nc, z, out, n);
#endif
  scalar::poly_eval_many(coef, nc, z, out, n);
}

void conv_lower(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n) {
#if defined(HAFFINE_BUILD_AVX2)
  if (g_backend == Backend::avx2) return avx2::conv_lower(b, nb, x, y, n);
#endif
  scalar::conv_lower(b, nb, x, y, n);
}

void corr_upper(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n) {
#if defined(HAFFINE_BUILD_AVX2)
  if (g_backend == Backend::avx2) return avx2::corr_upper(b, nb, x, y, n);
#endif
  scalar::corr_upper(b, nb, x, y, n);
}

double sum_abs_sq(const CD* x, std::size_t n) {
#if defined(HAFFINE_BUILD_AVX2)
  if (g_backend == Backend::avx2) return avx2::sum_abs_sq(x, n);
#endif
  return scalar::sum_abs_sq(x, n);
}

double max_abs_sq(const CD* x, std::size_t n) {
#if defined(HAFFINE_BUILD_AVX2)
  if (g_backend == Backend::avx2) return avx2::max_abs_sq(x, n);
#endif
  return scalar::max_abs_sq(x, n);
}

double sum_abs_pow(const CD* x, std::size_t n, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    s += std::pow(a2, 0.5 * p);
  }
  return s;
}

}  // namespace haffine::kern
