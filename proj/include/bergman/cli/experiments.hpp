#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bergman/cli/config.hpp"
#include "bergman/report.hpp"

namespace bergman::cli {

/// One claim of the verify experiment as `count` independent tasks.
struct ClaimPlan {
  std::string claim;
  std::size_t count = 0;
  /// Master seed for the claim; task i receives derive_seed(seed, i).
  std::uint64_t seed = 0;
  std::function<VerificationReport(std::size_t, std::uint64_t)> task;
};

ClaimPlan plan_claim(const std::string& claim, const ExperimentConfig& config);

/// Runs a plan on config.threads workers; the result is ordered by task id.
std::vector<VerificationReport> run_claim(const ClaimPlan& plan, unsigned threads);

struct RunResult {
  /// 0: every hard check passed; 1: some check failed; 2: numerical degeneracy.
  int status = 0;
  std::vector<std::string> files;
  std::size_t records = 0;
  std::size_t failures = 0;
  std::string message;
};

/// Executes a normalized config and writes its outputs under output.dir:
/// <prefix>.jsonl, <prefix>_summary.csv and <prefix>_config.json, plus the
/// experiment's own exports.
RunResult run(const ExperimentConfig& config);

/// Summary rows recomputed from a JSON-lines report.
std::vector<ClaimSummary> summarize_jsonl(std::istream& in);

}  // namespace bergman::cli
