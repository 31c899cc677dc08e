#include "bergman/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bergman {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 mix(master ^ (index * 0xd1342543de82ef95ULL));
  mix.next();
  return mix.next();
}

std::size_t Rng::index(std::size_t count) {
  if (count == 0) throw std::invalid_argument("index range is empty");
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % count;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return static_cast<std::size_t>(v % count);
}

std::complex<double> Rng::unit_disk() {
  while (true) {
    const double x = uniform(-1.0, 1.0);
    const double y = uniform(-1.0, 1.0);
    if (x * x + y * y < 1.0) return {x, y};
  }
}

double Rng::normal() {
  // Box-Muller on our own uniforms.
  double u = uniform();
  while (u <= 0.0) u = uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

std::vector<std::complex<double>> Rng::sphere_point(std::size_t n) {
  std::vector<std::complex<double>> z(n);
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (auto& c : z) {
      c = {normal(), normal()};
      norm += std::norm(c);
    }
  }
  norm = std::sqrt(norm);
  for (auto& c : z) c /= norm;
  return z;
}

std::vector<std::complex<double>> Rng::ball_point(std::size_t n) {
  auto z = sphere_point(n);
  const double radius = std::pow(uniform(), 1.0 / (2.0 * static_cast<double>(n)));
  for (auto& c : z) c *= radius;
  return z;
}

namespace {

QComplex random_coefficient(Rng& rng) {
  while (true) {
    const auto c = rng.unit_disk();
    QComplex q(rationalize(c.real(), kCoefficientBits), rationalize(c.imag(), kCoefficientBits));
    if (!q.is_zero()) return q;
  }
}

}  // namespace

ExactPoly generate_polynomial(const RandomPolySpec& spec, std::uint64_t seed) {
  if (spec.degree < 0) throw std::invalid_argument("random polynomial degree must be non-negative");
  if (spec.min_degree < 0 || spec.min_degree > spec.degree) {
    throw std::invalid_argument("random polynomial minimum degree must lie in [0, degree]");
  }
  Rng rng(seed);
  ExactPoly p(spec.n);
  const auto top = enumerate_homogeneous(spec.n, spec.degree);
  const std::size_t forced = rng.index(top.size());
  for (int d = spec.min_degree; d <= spec.degree; ++d) {
    const auto layer = d == spec.degree ? top : enumerate_homogeneous(spec.n, d);
    for (std::size_t k = 0; k < layer.size(); ++k) {
      const bool must = d == spec.degree && k == forced;
      // Always draw so the coefficient stream does not depend on the support.
      const double keep = rng.uniform();
      const QComplex c = random_coefficient(rng);
      if (must || spec.support == SupportModel::dense || keep < spec.density) p.add_term(layer[k], c);
    }
  }
  return p;
}

}  // namespace bergman
