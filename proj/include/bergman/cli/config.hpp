#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bergman/random.hpp"

namespace bergman::cli {

inline constexpr int kSchemaVersion = 1;

/// Invalid configuration; `field` is a dotted path such as "cover.samples".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class ExperimentKind { verify, commutator, cover, constants };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name);

/// Either a literal polynomial or a random model.
struct PolynomialSpec {
  std::optional<std::string> literal;
  int degree = 2;
  SupportModel support = SupportModel::dense;
  double density = 0.5;
  int min_degree = 0;
  /// Filled from the master seed during normalization.
  std::optional<std::uint64_t> seed;
};

struct VerifyOptions {
  std::vector<std::string> claims;
  /// Monomial grids: |alpha|, |beta| <= max_degree.
  int max_degree = 4;
  int k_max = 3;
  int t_max = 4;
  /// Partial sums checked by the commutator series tail bound.
  int series_terms = 30;
  /// Random trials per claim.
  std::size_t trials = 20;
  int f_degree = 2;
  /// Constant plugged into the series term bound.
  double series_constant = 2.0;
  /// Dilation radii as exact rationals.
  std::vector<std::string> dilation_radii{"3/5", "3/4", "9/10"};
  std::vector<double> disk_radii{0.5, 1.0};
  int max_radial_order = 12;
  /// Box distortion: random (z, z') pairs and probes per pair.
  std::size_t pairs = 1000;
  std::size_t probes = 0;
  double cover_c = 1e-3;
  double cover_r = 0.5;
  std::size_t identity_points = 20;
};

struct CommutatorOptions {
  std::vector<int> B{6};
  int l = 0;
  int t = 0;
  /// 1-based coordinates of S_i S_j^* - S_j^* S_i.
  std::size_t i = 1;
  std::size_t j = 1;
  /// Empty: {n, n+1/2, n+1, 2n}.
  std::vector<double> schatten;
  std::size_t top_k = 10;
  double stabilization_tolerance = 1e-2;
  /// "none", "csv" or "binary".
  std::string matrix_format = "none";
};

struct CoverOptions {
  std::size_t samples = 1000;
  double r = 0.5;
  double c = 1e-3;
  double shrink = 1.0 / 40000.0;
  double dilate = 40000.0;
  std::size_t probes = 1000;
  /// Sample and probe seed; filled from the master seed during normalization.
  std::optional<std::uint64_t> seed;
};

struct ConstantsOptions {
  std::vector<int> degrees{1, 2, 3};
  std::size_t trials = 500;
  int k_max = 6;
  int f_max_degree = 2;
  /// "shell_integral" or "weighted_norm".
  std::string form = "shell_integral";
};

struct OutputOptions {
  std::string dir = ".";
  std::string prefix = "bergman";
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  ExperimentKind kind = ExperimentKind::verify;
  std::size_t n = 2;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  PolynomialSpec polynomial;
  VerifyOptions verify;
  CommutatorOptions commutator;
  CoverOptions cover;
  ConstantsOptions constants;
  OutputOptions output;

  /// Fills defaults that depend on other fields (seeds, claim list) and checks ranges.
  void normalize();
};

/// All claim ids the verify experiment knows, in run order.
const std::vector<std::string>& verify_claims();

/// Strict parse: unknown keys and type mismatches raise ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

ExperimentConfig load_config(const std::string& path);

}  // namespace bergman::cli
