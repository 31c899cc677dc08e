#include "bergman/moments.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "bergman/random.hpp"

namespace bergman {

double to_double(const PiValue& v) { return to_double(v.coefficient) * std::pow(std::numbers::pi, v.pi_power); }

std::complex<double> to_complex(const PiComplex& v) {
  return v.coefficient.to_complex() * std::pow(std::numbers::pi, v.pi_power);
}

std::string to_string(const PiValue& v) {
  if (sgn(v.coefficient) == 0 || v.pi_power == 0) return to_string(v.coefficient);
  std::string out = to_string(v.coefficient) + "*pi";
  if (v.pi_power != 1) out += "^" + std::to_string(v.pi_power);
  return out;
}

Rational exact_ratio(const PiValue& a, const PiValue& b) {
  if (sgn(b.coefficient) == 0) throw std::domain_error("ratio with a zero denominator");
  if (sgn(a.coefficient) == 0) return Rational(0);
  if (a.pi_power != b.pi_power) throw std::invalid_argument("ratio of values with different powers of pi");
  return a.coefficient / b.coefficient;
}

nlohmann::json to_json(const PiValue& v) {
  return {{"rational", to_string(v.coefficient)}, {"pi_power", v.pi_power}, {"value", to_double(v)}};
}

Rational weight_constant(std::size_t n, int t) {
  if (t < 0) throw std::invalid_argument("weight exponent must be non-negative");
  const int ni = static_cast<int>(n);
  return Rational(factorial(ni + t)) / Rational(factorial(ni) * factorial(t));
}

Rational ball_volume_coefficient(std::size_t n) { return Rational(1) / Rational(factorial(static_cast<int>(n))); }

Region Region::shell(const Rational& r) {
  if (sgn(r) <= 0 || r >= 1) throw std::invalid_argument("shell radius must lie strictly between 0 and 1");
  return Region(Kind::shell, r);
}

Region Region::inner(const Rational& r) {
  if (sgn(r) <= 0 || r >= 1) throw std::invalid_argument("inner radius must lie strictly between 0 and 1");
  return Region(Kind::inner, r);
}

std::pair<Rational, Rational> Region::u_range() const {
  switch (kind_) {
    case Kind::ball:
      return {Rational(0), Rational(1)};
    case Kind::shell:
      return {radius_ * radius_, Rational(1)};
    case Kind::inner:
      return {Rational(0), radius_ * radius_};
  }
  throw std::logic_error("unknown region kind");
}

bool Region::contains(double norm_sq) const {
  if (norm_sq >= 1.0) return false;
  const double r = to_double(radius_);
  switch (kind_) {
    case Kind::ball:
      return true;
    case Kind::shell:
      return norm_sq > r * r;
    case Kind::inner:
      return norm_sq < r * r;
  }
  return false;
}

std::string Region::to_string() const {
  switch (kind_) {
    case Kind::ball:
      return "ball";
    case Kind::shell:
      return "shell(" + bergman::to_string(radius_) + ")";
    case Kind::inner:
      return "inner(" + bergman::to_string(radius_) + ")";
  }
  return "?";
}

Rational monomial_norm_sq(const MultiIndex& alpha, int t) {
  if (t < 0) throw std::invalid_argument("weight exponent must be non-negative");
  const int n = static_cast<int>(alpha.size());
  return Rational(alpha.factorial() * factorial(n + t)) / Rational(factorial(n + t + alpha.degree()));
}

Rational sphere_moment(const MultiIndex& alpha) {
  const int n = static_cast<int>(alpha.size());
  return Rational(factorial(n - 1) * alpha.factorial()) / Rational(factorial(n - 1 + alpha.degree()));
}

Rational radial_integral(int a, int t, const Rational& lo, const Rational& hi) {
  if (a < 0 || t < 0) throw std::invalid_argument("radial integral exponents must be non-negative");
  using Key = std::tuple<int, int, std::string, std::string>;
  thread_local std::map<Key, Rational> cache;
  Key key{a, t, to_string(lo), to_string(hi)};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  Rational value;
  if (sgn(lo) == 0 && hi == 1) {
    value = Rational(factorial(a) * factorial(t)) / Rational(factorial(a + t + 1));
  } else {
    // (1-u)^t = sum_k C(t,k) (-1)^k u^k
    for (int k = 0; k <= t; ++k) {
      const int e = a + k + 1;
      Rational term = Rational(binomial(t, k)) * (pow(hi, e) - pow(lo, e)) / Rational(e);
      if (k % 2) {
        value -= term;
      } else {
        value += term;
      }
    }
  }
  cache.emplace(std::move(key), value);
  return value;
}

PiValue moment(const MultiIndex& alpha, const MultiIndex& beta, int t, const Region& region) {
  if (alpha.size() != beta.size()) throw DimensionMismatch("moment indices differ in dimension");
  const int n = static_cast<int>(alpha.size());
  if (alpha != beta) return {Rational(0), n};
  const auto [lo, hi] = region.u_range();
  // Polar coordinates: area(S) * sphere moment * (1/2) int u^{|a|+n-1} (1-u)^t du.
  const int a = alpha.degree();
  Rational angular = Rational(alpha.factorial()) / Rational(factorial(n - 1 + a));
  return {angular * radial_integral(a + n - 1, t, lo, hi), n};
}

PiComplex integrate(const ExactMixedPoly& g, int t, const Region& region) {
  const int n = static_cast<int>(g.dim());
  QComplex total;
  for (const auto& [key, c] : g.terms()) {
    if (key.first != key.second) continue;
    total += c * QComplex(moment(key.first, key.second, t, region).coefficient);
  }
  return {total, n};
}

namespace {

PiValue apply_normalization(PiValue raw, std::size_t n, int t, Normalization normalization) {
  if (normalization == Normalization::raw) return raw;
  raw.coefficient *= weight_constant(n, t) * Rational(factorial(static_cast<int>(n)));
  raw.pi_power -= static_cast<int>(n);
  return raw;
}

std::vector<int> difference(const MultiIndex& a, const MultiIndex& b) {
  std::vector<int> d(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
  return d;
}

}  // namespace

PiValue weighted_l2_sq(const ExactMixedPoly& h, int t, const Region& region, Normalization normalization) {
  const std::size_t n = h.dim();
  // z^a1 conj(z)^b1 * conj(z^a2 conj(z)^b2) integrates to zero unless
  // a1 - b1 = a2 - b2, so terms are grouped by that difference.
  std::map<std::vector<int>, std::vector<std::pair<const ExactMixedPoly::Key*, const QComplex*>>> buckets;
  for (const auto& [key, c] : h.terms()) buckets[difference(key.first, key.second)].emplace_back(&key, &c);

  Rational total;
  for (const auto& [diff, members] : buckets) {
    for (const auto& [k1, c1] : members) {
      for (const auto& [k2, c2] : members) {
        const MultiIndex power = k1->first + k2->second;
        const QComplex w = *c1 * c2->conj();
        total += w.re * moment(power, power, t, region).coefficient;
      }
    }
  }
  return apply_normalization({total, static_cast<int>(n)}, n, t, normalization);
}

PiValue weighted_l2_sq(const ExactPoly& h, int t, const Region& region, Normalization normalization) {
  const std::size_t n = h.dim();
  Rational total;
  for (const auto& [alpha, c] : h.terms()) total += c.norm() * moment(alpha, alpha, t, region).coefficient;
  return apply_normalization({total, static_cast<int>(n)}, n, t, normalization);
}

PiComplex slice_integral(const ExactMixedPoly& g, int t) {
  const int n = static_cast<int>(g.dim());
  // int_B G dm = (pi^{n-1}/(n-1)!) int_S dsigma(xi) int_D G(xi z) |z|^{2n-2} dm(z).
  QComplex total;
  for (const auto& [key, c] : g.terms()) {
    const MultiIndex& alpha = key.first;
    const MultiIndex& beta = key.second;
    // Disk factor: z^{|a|} conj(z)^{|b|} averages to zero around circles unless |a| = |b|.
    if (alpha.degree() != beta.degree()) continue;
    // Sphere factor: xi^a conj(xi)^b has zero mean over the torus action unless a = b.
    if (alpha != beta) continue;
    const int a = alpha.degree();
    // pi * int_0^1 u^{a+n-1} (1-u)^t du, Beta function form.
    const Rational disk = Rational(factorial(a + n - 1) * factorial(t)) / Rational(factorial(a + n + t));
    const Rational sphere = Rational(factorial(n - 1) * alpha.factorial()) / Rational(factorial(n - 1 + a));
    const Rational prefactor = Rational(1) / Rational(factorial(n - 1));
    total += c * QComplex(prefactor * sphere * disk);
  }
  return {total, n};
}

double MonteCarloEstimate::z_score(std::complex<double> exact) const {
  const double dr = std::abs(value.real() - exact.real());
  const double di = std::abs(value.imag() - exact.imag());
  auto scaled = [](double d, double se) {
    if (se > 0.0) return d / se;
    return d == 0.0 ? 0.0 : INFINITY;
  };
  return std::max(scaled(dr, stderr_re), scaled(di, stderr_im));
}

MonteCarloEstimate monte_carlo_integral(const FloatMixedPoly& h, int t, const Region& region, std::size_t samples,
                                        std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
  const std::size_t n = h.dim();
  Rng rng(seed);
  std::vector<std::complex<double>> z(n);
  double sum_re = 0.0, sum_im = 0.0, sq_re = 0.0, sq_im = 0.0;
  for (std::size_t accepted = 0; accepted < samples;) {
    double norm_sq = 0.0;
    for (auto& c : z) {
      c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      norm_sq += std::norm(c);
    }
    if (norm_sq >= 1.0) continue;
    ++accepted;
    if (!region.contains(norm_sq)) continue;
    const std::complex<double> v = h.evaluate(z) * std::pow(1.0 - norm_sq, t);
    sum_re += v.real();
    sum_im += v.imag();
    sq_re += v.real() * v.real();
    sq_im += v.imag() * v.imag();
  }
  const double N = static_cast<double>(samples);
  const double volume = std::pow(std::numbers::pi, static_cast<double>(n)) / to_double(Rational(factorial(static_cast<int>(n))));
  const double mean_re = sum_re / N, mean_im = sum_im / N;
  auto standard_error = [N](double sq, double mean) {
    if (N < 2) return 0.0;
    const double var = std::max(0.0, (sq / N - mean * mean) * N / (N - 1));
    return std::sqrt(var / N);
  };
  MonteCarloEstimate out;
  out.value = {volume * mean_re, volume * mean_im};
  out.stderr_re = volume * standard_error(sq_re, mean_re);
  out.stderr_im = volume * standard_error(sq_im, mean_im);
  out.samples = samples;
  return out;
}

}  // namespace bergman
