#include "bergman/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

std::vector<Integer> radial_power_coeffs(int order) {
  if (order < 1) throw std::invalid_argument("radial power order must be at least one");
  // a^{(l+1)}_j = j a^{(l)}_j + a^{(l)}_{j-1}, with a_0 = a_{l+1} = 0.
  std::vector<Integer> a{Integer(1)};
  for (int l = 1; l < order; ++l) {
    std::vector<Integer> next(static_cast<std::size_t>(l) + 1);
    for (int j = 1; j <= l + 1; ++j) {
      Integer v = 0;
      if (j <= l) v += Integer(j) * a[static_cast<std::size_t>(j - 1)];
      if (j >= 2) v += a[static_cast<std::size_t>(j - 2)];
      next[static_cast<std::size_t>(j - 1)] = v;
    }
    a = std::move(next);
  }
  return a;
}

ExactPoly radial_power_by_coeffs(const ExactPoly& f, int order) {
  if (f.dim() != 1) throw DimensionMismatch("coefficient form of R^l is one-variable");
  if (order == 0) return f;
  const auto coeffs = radial_power_coeffs(order);
  ExactPoly out(1);
  ExactPoly derivative = f;
  for (std::size_t j = 1; j <= coeffs.size(); ++j) {
    derivative = partial_derivative(derivative, 0);
    ExactPoly shifted(1);
    for (const auto& [alpha, c] : derivative.terms()) {
      shifted.add_term(MultiIndex{alpha[0] + static_cast<int>(j)}, c * QComplex(Rational(coeffs[j - 1])));
    }
    out += shifted;
  }
  return out;
}

FloatPoly to_float(const ExactPoly& p) {
  FloatPoly out(p.dim());
  for (const auto& [alpha, c] : p.terms()) out.add_term(alpha, c.to_complex());
  return out;
}

FloatMixedPoly to_float(const ExactMixedPoly& p) {
  FloatMixedPoly out(p.dim());
  for (const auto& [key, c] : p.terms()) out.add_term(key.first, key.second, c.to_complex());
  return out;
}

double max_relative_difference(const FloatPoly& a, const FloatPoly& b) {
  double scale = 0.0;
  for (const auto& [alpha, c] : b.terms()) scale = std::max(scale, std::abs(c));
  FloatPoly diff = a - b;
  double worst = 0.0;
  for (const auto& [alpha, c] : diff.terms()) worst = std::max(worst, std::abs(c));
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace bergman
