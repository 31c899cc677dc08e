#include "bergman/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

namespace bergman {

double safe_ratio(double lhs, double rhs) {
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

void set_exact(VerificationReport& r, const PiValue& lhs, const PiValue& rhs) {
  r.kind = ScalarKind::exact;
  r.exact_lhs = lhs;
  r.exact_rhs = rhs;
  r.lhs = to_double(lhs);
  r.rhs = to_double(rhs);
  const bool lhs_zero = sgn(lhs.coefficient) == 0;
  const bool rhs_zero = sgn(rhs.coefficient) == 0;
  if (rhs_zero) {
    r.ratio = lhs_zero ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    r.ratio = to_double(exact_ratio(lhs, rhs));
  }
  if (r.relation == Relation::equal) {
    r.pass = lhs == rhs;
    return;
  }
  if (lhs_zero || rhs_zero) {
    r.pass = lhs_zero ? sgn(rhs.coefficient) >= 0 : sgn(lhs.coefficient) < 0;
    return;
  }
  if (lhs.pi_power != rhs.pi_power) throw std::invalid_argument("comparing values with different powers of pi");
  r.pass = lhs.coefficient <= rhs.coefficient;
}

void set_float(VerificationReport& r, double lhs, double rhs, double tol) {
  r.kind = ScalarKind::floating;
  r.exact_lhs.reset();
  r.exact_rhs.reset();
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = safe_ratio(lhs, rhs);
  const double slack = tol * std::max(1.0, std::abs(rhs));
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
    r.pass = false;
  } else if (r.relation == Relation::equal) {
    r.pass = std::abs(lhs - rhs) <= slack;
  } else {
    r.pass = lhs <= rhs + slack;
  }
}

void aggregate_parts(VerificationReport& r) {
  if (r.parts.empty()) return;
  const VerificationReport* worst = &r.parts.front();
  bool all = true;
  bool exact = true;
  for (const auto& p : r.parts) {
    all = all && p.pass;
    exact = exact && p.kind == ScalarKind::exact;
    if (!(p.ratio <= worst->ratio)) worst = &p;
  }
  r.kind = exact ? ScalarKind::exact : ScalarKind::floating;
  r.exact_lhs = worst->exact_lhs;
  r.exact_rhs = worst->exact_rhs;
  r.lhs = worst->lhs;
  r.rhs = worst->rhs;
  r.ratio = worst->ratio;
  r.pass = all;
}

namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["claim"] = claim;
  j["parameters"] = parameters;
  j["kind"] = kind == ScalarKind::exact ? "exact" : "float";
  j["relation"] = relation == Relation::equal ? "equal" : "less_equal";
  j["lhs"] = exact_lhs ? bergman::to_json(*exact_lhs) : finite_or_null(lhs);
  j["rhs"] = exact_rhs ? bergman::to_json(*exact_rhs) : finite_or_null(rhs);
  j["ratio"] = finite_or_null(ratio);
  if (exact_lhs && exact_rhs && sgn(exact_rhs->coefficient) != 0) {
    j["exact_ratio"] = to_string(exact_ratio(*exact_lhs, *exact_rhs));
  }
  if (constant) j["constant"] = finite_or_null(*constant);
  j["pass"] = pass;
  if (seed) j["seed"] = *seed;
  if (!details.empty()) j["details"] = details;
  if (!parts.empty()) {
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : parts) ps.push_back(p.to_json());
    j["parts"] = std::move(ps);
  }
  return j;
}

void write_jsonl(std::ostream& out, const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) out << r.to_json().dump() << '\n';
}

std::vector<ClaimSummary> summarize(const std::vector<VerificationReport>& reports) {
  std::vector<ClaimSummary> rows;
  std::map<std::string, std::size_t> where;
  for (const auto& r : reports) {
    auto [it, fresh] = where.try_emplace(r.claim, rows.size());
    if (fresh) {
      rows.push_back({r.claim, 0, 0, r.ratio, r.ratio, std::nullopt});
    }
    auto& row = rows[it->second];
    ++row.count;
    if (r.pass) ++row.passed;
    row.max_ratio = std::max(row.max_ratio, r.ratio);
    row.min_ratio = std::min(row.min_ratio, r.ratio);
    if (r.constant) row.max_constant = std::max(row.max_constant.value_or(*r.constant), *r.constant);
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<ClaimSummary>& rows) {
  out << "claim,count,passed,pass_rate,max_ratio,min_ratio,max_constant\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.claim << ',' << r.count << ',' << r.passed << ','
        << (r.count ? static_cast<double>(r.passed) / static_cast<double>(r.count) : 0.0) << ',' << r.max_ratio
        << ',' << r.min_ratio << ',';
    if (r.max_constant) out << *r.max_constant;
    out << '\n';
  }
}

}  // namespace bergman
