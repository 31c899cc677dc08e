#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "bergman/polynomial.hpp"

namespace bergman {

/// Derives child seeds from a master seed (one call per trial).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// mt19937_64 with hand-rolled real conversions, so draws are identical
/// across standard libraries (std::uniform_real_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer in [0, count).
  std::size_t index(std::size_t count);
  /// Uniform on the open unit disk.
  std::complex<double> unit_disk();
  /// Uniform in the unit ball of C^n.
  std::vector<std::complex<double>> ball_point(std::size_t n);
  /// Uniform on the unit sphere of C^n.
  std::vector<std::complex<double>> sphere_point(std::size_t n);
  double normal();

 private:
  std::mt19937_64 engine_;
};

inline constexpr int kCoefficientBits = 24;

enum class SupportModel { dense, sparse };

struct RandomPolySpec {
  std::size_t n = 1;
  int degree = 1;
  SupportModel support = SupportModel::dense;
  /// Probability that a non-forced monomial is kept in the sparse model.
  double density = 0.5;
  /// Lowest degree allowed in the support (f vanishing to order l at 0).
  int min_degree = 0;
};

/// Coefficients uniform on the unit disk, rationalized at 2^-24. The degree
/// is exact: one top-degree term is always present.
ExactPoly generate_polynomial(const RandomPolySpec& spec, std::uint64_t seed);

}  // namespace bergman
