#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "bergman/multi_index.hpp"
#include "bergman/polynomial.hpp"
#include "bergman/rational.hpp"

namespace bergman {

/// coefficient * pi^pi_power. Integrals over C^n carry pi^n; pi is only
/// turned into a double when a report is rendered.
template <class T>
struct PiMultiple {
  T coefficient{};
  int pi_power = 0;

  PiMultiple& operator+=(const PiMultiple& o) {
    if (is_zero_coefficient(o.coefficient)) return *this;
    if (is_zero_coefficient(coefficient)) {
      *this = o;
      return *this;
    }
    if (o.pi_power != pi_power) throw std::invalid_argument("adding values with different powers of pi");
    coefficient += o.coefficient;
    return *this;
  }
  friend PiMultiple operator+(PiMultiple a, const PiMultiple& b) { return a += b; }
  friend bool operator==(const PiMultiple& a, const PiMultiple& b) {
    if (is_zero_coefficient(a.coefficient) && is_zero_coefficient(b.coefficient)) return true;
    return a.pi_power == b.pi_power && a.coefficient == b.coefficient;
  }

 private:
  static bool is_zero_coefficient(const Rational& q) { return sgn(q) == 0; }
  static bool is_zero_coefficient(const QComplex& z) { return z.is_zero(); }
};

using PiValue = PiMultiple<Rational>;
using PiComplex = PiMultiple<QComplex>;

double to_double(const PiValue& v);
std::complex<double> to_complex(const PiComplex& v);
std::string to_string(const PiValue& v);

/// a / b as an exact rational; the pi powers must agree unless a is zero.
Rational exact_ratio(const PiValue& a, const PiValue& b);

/// {"rational": "p/q", "pi_power": k, "value": double}
nlohmann::json to_json(const PiValue& v);

enum class Normalization {
  raw,         ///< against Lebesgue measure dm
  normalized,  ///< against c_t (1-|z|^2)^t dv with dv = dm / Vol(B_n)
};

struct WeightSpec {
  int t = 0;
  Normalization normalization = Normalization::raw;
};

/// c_t = (n+t)! / (n! t!)
Rational weight_constant(std::size_t n, int t);

/// Pi-free part of Vol(B_n) = pi^n / n!.
Rational ball_volume_coefficient(std::size_t n);

class Region {
 public:
  enum class Kind { ball, shell, inner };

  static Region ball() { return Region(Kind::ball, Rational(0)); }
  /// {r < |z| < 1}, 0 < r < 1.
  static Region shell(const Rational& r);
  /// {|z| < r}, 0 < r < 1.
  static Region inner(const Rational& r);

  Kind kind() const { return kind_; }
  const Rational& radius() const { return radius_; }
  /// Range of u = |z|^2 covered by the region.
  std::pair<Rational, Rational> u_range() const;
  bool contains(double norm_sq) const;
  std::string to_string() const;

 private:
  Region(Kind kind, Rational r) : kind_(kind), radius_(std::move(r)) {}
  Kind kind_;
  Rational radius_;
};

/// ||z^alpha||_t^2 = alpha! (n+t)! / (n+t+|alpha|)!, weight normalized.
Rational monomial_norm_sq(const MultiIndex& alpha, int t);

/// Integral of |xi^alpha|^2 against the normalized surface measure.
Rational sphere_moment(const MultiIndex& alpha);

/// int_lo^hi u^a (1-u)^t du, exact.
Rational radial_integral(int a, int t, const Rational& lo, const Rational& hi);

/// int_region z^alpha conj(z)^beta (1-|z|^2)^t dm, exact.
PiValue moment(const MultiIndex& alpha, const MultiIndex& beta, int t, const Region& region);

/// int_region g (1-|z|^2)^t dm for a mixed polynomial g (linear in g).
PiComplex integrate(const ExactMixedPoly& g, int t, const Region& region);

/// int_region |h|^2 (1-|z|^2)^t, against dm or the normalized weighted measure.
PiValue weighted_l2_sq(const ExactMixedPoly& h, int t, const Region& region,
                       Normalization normalization = Normalization::raw);
PiValue weighted_l2_sq(const ExactPoly& h, int t, const Region& region,
                       Normalization normalization = Normalization::raw);

/// int_B g (1-|z|^2)^t dm computed through one-variable slices g(xi z).
/// Independent of `integrate`: the α≠β terms vanish by the angular average
/// of the slice and the radial factor is a one-variable disk moment.
PiComplex slice_integral(const ExactMixedPoly& g, int t = 0);

struct MonteCarloEstimate {
  std::complex<double> value;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::size_t samples = 0;

  /// |estimate - exact| in units of the larger standard error.
  double z_score(std::complex<double> exact) const;
};

/// Uniform rejection sampling in the ball; `samples` counts accepted points.
MonteCarloEstimate monte_carlo_integral(const FloatMixedPoly& h, int t, const Region& region, std::size_t samples,
                                        std::uint64_t seed);

}  // namespace bergman
