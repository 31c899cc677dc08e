#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bergman/moments.hpp"

namespace bergman {

enum class ScalarKind { exact, floating };

/// How lhs and rhs must relate for the check to pass.
enum class Relation { less_equal, equal };

inline constexpr double kFloatRelativeTolerance = 1e-9;

struct VerificationReport {
  std::string claim;
  nlohmann::json parameters = nlohmann::json::object();
  ScalarKind kind = ScalarKind::exact;
  Relation relation = Relation::less_equal;
  /// Set for exact reports; lhs/rhs below are their renderings.
  std::optional<PiValue> exact_lhs;
  std::optional<PiValue> exact_rhs;
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs / rhs (0 when both vanish, infinity when only rhs does).
  double ratio = 0.0;
  /// Empirical constant attached to the check, if any.
  std::optional<double> constant;
  bool pass = false;
  std::optional<std::uint64_t> seed;
  nlohmann::json details = nlohmann::json::object();
  /// Sub-checks; a report with parts passes iff every part passes, and its
  /// lhs/rhs are those of the part with the largest ratio.
  std::vector<VerificationReport> parts;

  nlohmann::json to_json() const;
};

/// Fills lhs/rhs/ratio/pass from exact values.
void set_exact(VerificationReport& r, const PiValue& lhs, const PiValue& rhs);
/// Float comparison: lhs <= rhs + tol * max(1, |rhs|) (equal: |lhs - rhs| <= that).
void set_float(VerificationReport& r, double lhs, double rhs, double tol = kFloatRelativeTolerance);
/// Recomputes the aggregate fields from `parts`.
void aggregate_parts(VerificationReport& r);

double safe_ratio(double lhs, double rhs);

void write_jsonl(std::ostream& out, const std::vector<VerificationReport>& reports);

struct ClaimSummary {
  std::string claim;
  std::size_t count = 0;
  std::size_t passed = 0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  std::optional<double> max_constant;
};

/// One row per claim id, in order of first appearance.
std::vector<ClaimSummary> summarize(const std::vector<VerificationReport>& reports);
void write_summary_csv(std::ostream& out, const std::vector<ClaimSummary>& rows);

}  // namespace bergman
