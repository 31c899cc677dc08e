#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace bergman {

using Integer = mpz_class;
using Rational = mpq_class;

/// Builds num/den in canonical form.
Rational make_rational(long num, long den);
Rational make_rational(const Integer& num, const Integer& den);

/// n! from a shared table (exact).
const Integer& factorial(int n);

/// Binomial coefficient C(n, k), zero outside 0 <= k <= n.
Integer binomial(int n, int k);

Rational pow(const Rational& base, int exponent);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Parses "p", "-p/q" or a finite decimal such as "0.75" into an exact value.
Rational parse_rational(const std::string& text);

double to_double(const Rational& q);

/// Nearest rational with denominator 2^bits.
Rational rationalize(double x, int bits);

/// Exact complex scalar with rational real and imaginary parts.
struct QComplex {
  Rational re;
  Rational im;

  QComplex() = default;
  QComplex(long v) : re(v) {}  // NOLINT(google-explicit-constructor)
  QComplex(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  QComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  QComplex conj() const { return {re, -im}; }
  /// |z|^2
  Rational norm() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QComplex& operator-=(const QComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  QComplex& operator*=(const QComplex& o);
  QComplex& operator/=(const QComplex& o);

  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const QComplex& a, const QComplex& b) { return !(a == b); }
};

std::string to_string(const QComplex& z);

/// Uniform interface over the two scalar kinds used by the polynomial layer.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<QComplex> {
  static constexpr bool exact = true;
  static constexpr double tolerance = 0.0;
  static bool is_zero(const QComplex& z) { return z.is_zero(); }
  static QComplex conj(const QComplex& z) { return z.conj(); }
  static QComplex from_int(long v) { return QComplex(v); }
  static std::complex<double> to_complex(const QComplex& z) { return z.to_complex(); }
};

template <>
struct ScalarTraits<std::complex<double>> {
  static constexpr bool exact = false;
  /// Relative tolerance used when comparing float-kind results.
  static constexpr double tolerance = 1e-12;
  static bool is_zero(const std::complex<double>& z) { return z == 0.0; }
  static std::complex<double> conj(const std::complex<double>& z) { return std::conj(z); }
  static std::complex<double> from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static std::complex<double> to_complex(const std::complex<double>& z) { return z; }
};

}  // namespace bergman
