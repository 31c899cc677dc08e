#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "bergman/operators.hpp"

namespace bergman {

struct SingularSpectrum {
  /// Descending, non-negative.
  std::vector<double> values;
  /// Per value: its singular vectors live mostly in the truncation band.
  std::vector<bool> contaminated;
  std::string source;

  std::size_t clean_count() const;
};

/// Rejects non-finite entries.
SingularSpectrum singular_values(const Eigen::MatrixXcd& m, std::string source = {});
SingularSpectrum singular_values(const OperatorMatrix& m, std::string source = {});

/// Full compressed operator; a value is flagged when more than half of the
/// weight of its left or right singular vector sits in band coordinates.
SingularSpectrum singular_values(const CompressedOperator& c, std::string source = {});

/// Spectrum of the leading interior block only (nothing flagged).
SingularSpectrum interior_singular_values(const CompressedOperator& c, std::string source = {});

inline constexpr double kSchattenInfinity = std::numeric_limits<double>::infinity();

/// (sum sigma^q)^(1/q); q = kSchattenInfinity gives sigma_1. Flagged values
/// are skipped unless include_contaminated is set.
double schatten_norm(const SingularSpectrum& s, double q, bool include_contaminated = false);

/// {n, n + 1/2, n + 1, 2n}
std::vector<double> default_schatten_grid(std::size_t n);

struct DecayReport {
  std::vector<double> labels;
  std::size_t top_k = 0;
  /// relative_change[s][k]: index k between spectra s and s+1.
  std::vector<std::vector<double>> relative_change;
  std::vector<double> exponents;
  /// schatten[s][e]: norm of spectrum s at exponents[e].
  std::vector<std::vector<double>> schatten;
  /// Indices whose last-step change exceeds the tolerance.
  std::vector<std::size_t> non_stabilizing;
  double tolerance = 0.0;

  nlohmann::json to_json() const;
};

/// Stabilization of the top-k values across a sequence of spectra (e.g. increasing B).
DecayReport decay_report(const std::vector<SingularSpectrum>& series, const std::vector<double>& labels,
                         std::size_t top_k, const std::vector<double>& exponents, double tolerance = 1e-2);

/// CSV with header "index,value,contaminated".
void write_spectrum_csv(std::ostream& out, const SingularSpectrum& s);

}  // namespace bergman
