#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace haffine::kern {

using CD = std::complex<double>;

enum class Backend { scalar, avx2 };

// Runtime-selected backend. Defaults to the widest instruction set the CPU
// supports; can be pinned (e.g. from the CLI) for equivalence testing.
Backend active_backend();
bool set_backend(const std::string& name);  // "auto" | "scalar" | "avx2"
bool avx2_available();
std::string backend_name(Backend b);

// out[i] = sum_k coef[k] * z[i]^k   (Horner, degree nc-1)
void poly_eval_many(const CD* coef, std::size_t nc, const CD* z, CD* out, std::size_t n);

// y[k] = sum_{j<=min(k,nb-1)} b[j] * x[k-j]   (lower-triangular Toeplitz section)
void conv_lower(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n);

// y[k] = sum_{j<nb, k+j<n} conj(b[j]) * x[k+j]   (adjoint section)
void corr_upper(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n);

double sum_abs_sq(const CD* x, std::size_t n);
double max_abs_sq(const CD* x, std::size_t n);

// sum_i |x_i|^p (scalar only; pow dominates, not worth vectorizing)
double sum_abs_pow(const CD* x, std::size_t n, double p);

// Reference implementations, always available regardless of dispatch.
namespace scalar {
void poly_eval_many(const CD* coef, std::size_t nc, const CD* z, CD* out, std::size_t n);
void conv_lower(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n);
void corr_upper(const CD* b, std::size_t nb, const CD* x, CD* y, std::size_t n);
double sum_abs_sq(const CD* x, std::size_t n);
double max_abs_sq(const CD* x, std::size_t n);
}  // namespace scalar

}  // namespace haffine::kern
