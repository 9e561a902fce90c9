#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace haffine {

using Rat = mpq_class;
using CD = std::complex<double>;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct capacity_error : error {
  using error::error;
};
struct parse_error : error {
  using error::error;
};

inline Rat make_rat(long p, long q = 1) {
  if (q == 0) throw error("rational with zero denominator");
  Rat r(p, q);
  r.canonicalize();
  return r;
}

// 2^{-k} as an exact rational, k >= 0
inline Rat pow2_inv(unsigned k) {
  Rat r(1);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), k);
  return r;
}

inline Rat pow2_rat(long k) {
  Rat r(1);
  if (k >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(k));
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-k));
  return r;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

// Complex number with exact rational parts.
struct CplxQ {
  Rat re{0};
  Rat im{0};

  CplxQ() = default;
  CplxQ(Rat r) : re(std::move(r)) {}
  CplxQ(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  CplxQ(long n) : re(n) {}

  friend CplxQ operator+(const CplxQ& a, const CplxQ& b) { return {a.re + b.re, a.im + b.im}; }
  friend CplxQ operator-(const CplxQ& a, const CplxQ& b) { return {a.re - b.re, a.im - b.im}; }
  friend CplxQ operator-(const CplxQ& a) { return {-a.re, -a.im}; }
  friend CplxQ operator*(const CplxQ& a, const CplxQ& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CplxQ operator/(const CplxQ& a, const CplxQ& b) {
    Rat d = b.re * b.re + b.im * b.im;
    if (d == 0) throw error("division by zero");
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  CplxQ& operator+=(const CplxQ& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  CplxQ& operator-=(const CplxQ& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  CplxQ& operator*=(const CplxQ& b) {
    *this = *this * b;
    return *this;
  }
  friend bool operator==(const CplxQ& a, const CplxQ& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CplxQ& a, const CplxQ& b) { return !(a == b); }
};

// ---- scalar traits: the algebra below is generic over exact (CplxQ) and
// float (std::complex<double>) coefficients.

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<CplxQ> {
  static constexpr bool exact = true;
  using real_type = Rat;
  static CplxQ zero() { return CplxQ(); }
  static CplxQ one() { return CplxQ(1); }
  static CplxQ from_int(long n) { return CplxQ(n); }
  static CplxQ from_ratio(long p, long q) { return CplxQ(make_rat(p, q)); }
  static real_type real_zero() { return Rat(0); }
  static Rat abs_sq(const CplxQ& s) { return s.re * s.re + s.im * s.im; }
  static CplxQ conj(const CplxQ& s) { return {s.re, -s.im}; }
  static bool is_zero(const CplxQ& s) { return s.re == 0 && s.im == 0; }
  static CD to_cd(const CplxQ& s) { return {s.re.get_d(), s.im.get_d()}; }
  static double real_to_double(const Rat& r) { return r.get_d(); }
  // exact scalars halve losslessly
  static CplxQ half(const CplxQ& s) {
    CplxQ r = s;
    mpq_div_2exp(r.re.get_mpq_t(), r.re.get_mpq_t(), 1);
    mpq_div_2exp(r.im.get_mpq_t(), r.im.get_mpq_t(), 1);
    return r;
  }
  static CplxQ scale_pow2(const CplxQ& s, long k) {
    Rat f = pow2_rat(k);
    return {s.re * f, s.im * f};
  }
};

template <>
struct scalar_traits<CD> {
  static constexpr bool exact = false;
  using real_type = double;
  static CD zero() { return {0.0, 0.0}; }
  static CD one() { return {1.0, 0.0}; }
  static CD from_int(long n) { return {static_cast<double>(n), 0.0}; }
  static CD from_ratio(long p, long q) { return {static_cast<double>(p) / q, 0.0}; }
  static real_type real_zero() { return 0.0; }
  static double abs_sq(const CD& s) { return s.real() * s.real() + s.imag() * s.imag(); }
  static CD conj(const CD& s) { return std::conj(s); }
  static bool is_zero(const CD& s) { return s.real() == 0.0 && s.imag() == 0.0; }
  static CD to_cd(const CD& s) { return s; }
  static double real_to_double(double r) { return r; }
  static CD half(const CD& s) { return s * 0.5; }
  static CD scale_pow2(const CD& s, long k) { return s * std::ldexp(1.0, static_cast<int>(k)); }
};

template <class S>
inline typename scalar_traits<S>::real_type abs_sq(const S& s) {
  return scalar_traits<S>::abs_sq(s);
}

template <class S>
inline S conjugate(const S& s) {
  return scalar_traits<S>::conj(s);
}

inline CD to_cd(const CplxQ& s) { return scalar_traits<CplxQ>::to_cd(s); }
inline CD to_cd(const CD& s) { return s; }

}  // namespace haffine
