#pragma once

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

/// Arbitrary-precision exact rational. All exact algebra runs on this type.
using Rational = mpq_class;

/// Parses "p/q", "p" or a finite decimal literal ("-0.125") into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& q);

/// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double x);
/// x rounded to a `bits`-bit mantissa, then converted exactly.
Rational rational_from_double_rounded(double x, int bits);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact Gaussian rational re + i*im.
struct Gaussian {
  Rational re;
  Rational im;

  Gaussian() = default;
  Gaussian(Rational r) : re(std::move(r)), im(0) {}  // NOLINT: implicit real embedding
  Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  Gaussian(long r) : re(r), im(0) {}  // NOLINT

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  Gaussian conj() const { return {re, -im}; }
  Rational norm_squared() const { return re * re + im * im; }

  friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
  friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
  friend Gaussian operator-(const Gaussian& a) { return {-a.re, -a.im}; }
  friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Gaussian operator/(const Gaussian& a, const Gaussian& b) {
    if (b.is_zero()) throw std::domain_error("Gaussian division by zero");
    Rational n = b.norm_squared();
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  Gaussian& operator+=(const Gaussian& o) { return *this = *this + o; }
  Gaussian& operator-=(const Gaussian& o) { return *this = *this - o; }
  Gaussian& operator*=(const Gaussian& o) { return *this = *this * o; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

Gaussian pow(const Gaussian& base, unsigned exponent);

/// "a", or "a+bi" / "a-bi" with rational parts.
std::string format_gaussian(const Gaussian& z);

/// Scalar conversion used by the templated (exact / float) code paths.
template <class T>
T scalar_from_rational(const Rational& q);

template <>
inline Rational scalar_from_rational<Rational>(const Rational& q) { return q; }
template <>
inline double scalar_from_rational<double>(const Rational& q) { return q.get_d(); }
template <>
inline std::complex<double> scalar_from_rational<std::complex<double>>(const Rational& q) {
  return {q.get_d(), 0.0};
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>{}; }

/// True for scalar kinds on which exact identities may be asserted.
template <class T>
inline constexpr bool is_exact_scalar_v = std::is_same_v<T, Rational>;

}  // namespace carnot
