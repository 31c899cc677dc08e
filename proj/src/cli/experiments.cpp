#include "bergman/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "bergman/covering.hpp"
#include "bergman/inequalities.hpp"
#include "bergman/operators.hpp"
#include "bergman/parallel.hpp"
#include "bergman/poly_io.hpp"
#include "bergman/spectra.hpp"

namespace bergman::cli {

namespace {

using nlohmann::json;

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::vector<MultiIndex> monomials(std::size_t n, int max_degree) { return BasisSpec(n, 0, max_degree).indices(); }

/// p for trial seed s: the literal, or a draw from the random model.
ExactPoly trial_p(const ExperimentConfig& c, std::uint64_t s, std::size_t n) {
  const auto& spec = c.polynomial;
  if (spec.literal && n == c.n) return parse_poly(*spec.literal, n);
  return generate_polynomial({n, spec.degree, spec.support, spec.density, spec.min_degree}, s);
}

/// Second random polynomial from the same trial seed.
ExactPoly trial_f(std::uint64_t s, std::size_t n, int max_degree, int min_degree = 0) {
  SplitMix64 sub(s ^ 0x5f0f5f0f5f0f5f0fULL);
  const std::uint64_t draw = sub.next();
  const int span = std::max(max_degree - min_degree, 0);
  const int degree = min_degree + static_cast<int>(Rng(draw).index(static_cast<std::size_t>(span) + 1));
  return generate_polynomial({n, degree, SupportModel::dense, 0.5, min_degree}, sub.next());
}

VerificationReport tag(VerificationReport r, std::size_t trial, std::uint64_t seed) {
  r.parameters["trial"] = trial;
  r.seed = seed;
  return r;
}

/// k <= kmax and the family's admissible indices, flattened.
std::vector<ShellQuery> shell_queries(ShellFamily family, std::size_t n, int kmax) {
  std::vector<ShellQuery> out;
  for (int k = 0; k <= kmax; ++k) {
    switch (family) {
      case ShellFamily::radial:
        for (int l = 0; l <= k; ++l) out.push_back({family, k, l});
        break;
      case ShellFamily::tangential:
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < i; ++j) out.push_back({family, k, 0, i, j});
        }
        break;
      case ShellFamily::partial:
        for (std::size_t j = 0; j < n; ++j) out.push_back({family, k, 0, 0, j});
        break;
    }
  }
  return out;
}

VerificationReport radial_coefficient_report(int order, std::uint64_t seed) {
  VerificationReport r;
  r.claim = "radial_power_coefficients";
  r.parameters = {{"l", order}};
  r.seed = seed;
  const auto coeffs = radial_power_coeffs(order);
  json table = json::array();
  for (std::size_t j = 1; j <= coeffs.size(); ++j) {
    Integer power = 1;
    for (int e = 0; e < order; ++e) power *= static_cast<long>(j + 1);
    VerificationReport part;
    part.claim = r.claim;
    const Rational a = Rational(abs(coeffs[j - 1]));
    set_exact(part, {a, 0}, {Rational(power), 0});
    part.pass = a < Rational(power);  // strict
    part.details = {{"part", "bound"}, {"j", j}};
    r.parts.push_back(std::move(part));
    table.push_back(coeffs[j - 1].get_str());
  }
  // The coefficient form reproduces R^l on a random one-variable polynomial.
  const ExactPoly f = generate_polynomial({1, order + 3}, seed);
  const ExactPoly diff = radial_power_by_coeffs(f, order) - radial_power(f, order);
  VerificationReport expansion;
  expansion.claim = r.claim;
  expansion.relation = Relation::equal;
  set_exact(expansion, {Rational(static_cast<long>(diff.terms().size())), 0}, {Rational(0), 0});
  expansion.details = {{"part", "expansion"}, {"f", format_poly(f)}};
  r.parts.push_back(std::move(expansion));
  aggregate_parts(r);
  r.details["coefficients"] = table;
  return r;
}

}  // namespace

ClaimPlan plan_claim(const std::string& claim, const ExperimentConfig& c) {
  const auto& v = c.verify;
  const std::size_t n = c.n;
  ClaimPlan plan;
  plan.claim = claim;
  plan.seed = derive_seed(c.seed, name_hash(claim));

  if (claim == "commutator_series_identity") {
    auto idx = std::make_shared<std::vector<MultiIndex>>(monomials(n, v.max_degree));
    const std::size_t m = idx->size();
    plan.count = m * m * n;
    plan.task = [idx, m, n, K = v.series_terms](std::size_t t, std::uint64_t) {
      const std::size_t j = t % n, b = (t / n) % m, a = t / (n * m);
      return verify_commutator_series((*idx)[a], (*idx)[b], j, K);
    };
  } else if (claim == "number_operator_weight_bounds") {
    struct Case {
      MultiIndex alpha;
      int k, l;
    };
    auto cases = std::make_shared<std::vector<Case>>();
    for (const auto& a : monomials(n, v.max_degree)) {
      for (int k = 0; k <= v.k_max; ++k) {
        for (int l = 0; l <= a.degree(); ++l) cases->push_back({a, k, l});
      }
    }
    plan.count = cases->size();
    plan.task = [cases](std::size_t t, std::uint64_t) {
      const auto& cs = (*cases)[t];
      return verify_number_operator_bounds(ExactPoly::monomial(cs.alpha), cs.k, cs.l);
    };
  } else if (claim == "shell_radial_bound" || claim == "shell_tangential_bound" || claim == "shell_partial_bound") {
    const ShellFamily family = claim == "shell_radial_bound"       ? ShellFamily::radial
                               : claim == "shell_tangential_bound" ? ShellFamily::tangential
                                                                   : ShellFamily::partial;
    auto queries = std::make_shared<std::vector<ShellQuery>>(shell_queries(family, n, v.k_max));
    plan.count = queries->empty() ? 0 : v.trials;
    plan.task = [c, queries, n, fd = v.f_degree](std::size_t t, std::uint64_t s) {
      const ExactPoly p = trial_p(c, s, n);
      const ExactPoly f = trial_f(s, n, fd);
      const double cap = reference_shell_cap(n, p.degree());
      VerificationReport r;
      r.claim = claim_id((*queries)[0].family);
      r.parameters = {{"p", format_poly(p)}, {"f", format_poly(f)}, {"cap", cap}};
      double constant = 0.0;
      for (const auto& q : *queries) {
        auto part = verify_shell_bound(p, f, q, cap);
        if (part.constant) constant = std::max(constant, *part.constant);
        r.parts.push_back(std::move(part));
      }
      aggregate_parts(r);
      r.constant = constant;
      return tag(std::move(r), t, s);
    };
  } else if (claim == "series_term_bound") {
    plan.count = v.trials;
    plan.task = [c, n, fd = v.f_degree, C = v.series_constant, kmax = v.k_max](std::size_t t, std::uint64_t s) {
      const ExactPoly p = trial_p(c, s, n);
      const int l = static_cast<int>(t % static_cast<std::size_t>(fd + 1));
      const ExactPoly f = trial_f(s, n, fd, l);
      return tag(verify_series_aggregate(p, f, t % n, l, C, kmax), t, s);
    };
  } else if (claim == "shell_mass_bound") {
    auto idx = std::make_shared<std::vector<MultiIndex>>(monomials(n, v.max_degree));
    const std::size_t grid = idx->size() * static_cast<std::size_t>(v.t_max + 1);
    plan.count = grid + v.trials;
    plan.task = [c, idx, grid, n, tmax = v.t_max](std::size_t t, std::uint64_t s) {
      const auto T = static_cast<std::size_t>(tmax + 1);
      if (t < grid) return verify_shell_mass(ExactPoly::monomial((*idx)[t / T]), static_cast<int>(t % T));
      const std::size_t trial = t - grid;
      return tag(verify_shell_mass(trial_p(c, s, n), static_cast<int>(trial % T)), trial, s);
    };
  } else if (claim == "dilation_bound") {
    auto idx = std::make_shared<std::vector<MultiIndex>>(monomials(n, v.max_degree));
    auto radii = std::make_shared<std::vector<Rational>>();
    for (const auto& r : v.dilation_radii) radii->push_back(parse_rational(r));
    const std::size_t R = radii->size();
    const std::size_t grid = idx->size() * idx->size() * R;
    plan.count = grid + v.trials * R;
    plan.task = [c, idx, radii, grid, R, n, fd = v.f_degree](std::size_t t, std::uint64_t s) {
      if (t < grid) {
        const std::size_t m = idx->size();
        const std::size_t r = t % R, b = (t / R) % m, a = t / (R * m);
        return verify_dilation_bound(ExactPoly::monomial((*idx)[a]), ExactPoly::monomial((*idx)[b]), (*radii)[r]);
      }
      const std::size_t trial = (t - grid) / R;
      const std::uint64_t ts = derive_seed(s, 0);
      return tag(verify_dilation_bound(trial_p(c, ts, n), trial_f(ts, n, fd), (*radii)[(t - grid) % R]), trial, s);
    };
  } else if (claim == "circle_derivative_bound") {
    const int m = c.polynomial.literal ? 0 : c.polynomial.degree;
    plan.count = m >= 1 ? v.trials : 0;
    plan.task = [c, m, radii = v.disk_radii, fd = v.f_degree](std::size_t t, std::uint64_t s) {
      const auto& spec = c.polynomial;
      const ExactPoly p = generate_polynomial({1, m, spec.support, spec.density, 0}, s);
      const ExactPoly f = trial_f(s, 1, fd);
      const int l = 1 + static_cast<int>(t % static_cast<std::size_t>(m));
      const double r = radii[(t / static_cast<std::size_t>(m)) % radii.size()];
      return tag(verify_circle_derivative_bound(p, f, l, m, r), t, s);
    };
  } else if (claim == "radial_tangential_identity") {
    plan.count = v.trials;
    plan.task = [c, n, points = v.identity_points](std::size_t t, std::uint64_t s) {
      return tag(verify_radial_tangential_identity(trial_p(c, s, n), t % n, points, s), t, s);
    };
  } else if (claim == "radial_power_coefficients") {
    plan.count = static_cast<std::size_t>(v.max_radial_order);
    plan.task = [](std::size_t t, std::uint64_t s) { return radial_coefficient_report(static_cast<int>(t) + 1, s); };
  } else if (claim == "box_distortion") {
    plan.count = v.pairs;
    CoverConfig cfg;
    cfg.n = n;
    cfg.r = v.cover_r;
    cfg.c = v.cover_c;
    plan.task = [cfg, probes = v.probes](std::size_t t, std::uint64_t s) {
      Rng rng(s);
      const Point z = sample_shell_point(rng, cfg.n, cfg.r);
      const Point zp = sample_in_box({z, cfg.delta(z)}, rng, t % 2 == 1);
      return tag(check_box_distortion(z, zp, cfg, probes, derive_seed(s, 1)), t, s);
    };
  } else {
    throw ConfigError("verify.claims", "unknown claim '" + claim + "'");
  }
  return plan;
}

std::vector<VerificationReport> run_claim(const ClaimPlan& plan, unsigned threads) {
  return run_trials(plan.count, plan.seed, plan.task, threads);
}

namespace {

namespace fs = std::filesystem;

class Outputs {
 public:
  Outputs(const ExperimentConfig& c, RunResult& result) : c_(c), result_(result) {
    fs::create_directories(c.output.dir);
  }

  std::ofstream open(const std::string& suffix, bool binary = false) {
    const fs::path path = fs::path(c_.output.dir) / (c_.output.prefix + suffix);
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    result_.files.push_back(path.string());
    return out;
  }

 private:
  const ExperimentConfig& c_;
  RunResult& result_;
};

void finish_reports(const std::vector<VerificationReport>& reports, Outputs& out, RunResult& result) {
  auto jsonl = out.open(".jsonl");
  write_jsonl(jsonl, reports);
  auto csv = out.open("_summary.csv");
  write_summary_csv(csv, summarize(reports));
  result.records = reports.size();
  for (const auto& r : reports) result.failures += r.pass ? 0 : 1;
  if (result.failures > 0) {
    result.status = 1;
    result.message = std::to_string(result.failures) + " of " + std::to_string(reports.size()) + " checks failed";
  }
}

void run_verify(const ExperimentConfig& c, Outputs& out, RunResult& result) {
  std::vector<VerificationReport> all;
  for (const auto& claim : c.verify.claims) {
    auto reports = run_claim(plan_claim(claim, c), c.threads);
    all.insert(all.end(), std::make_move_iterator(reports.begin()), std::make_move_iterator(reports.end()));
  }
  finish_reports(all, out, result);
}

void run_commutator(const ExperimentConfig& c, Outputs& out, RunResult& result) {
  const auto& o = c.commutator;
  const ExactPoly p = c.polynomial.literal
                          ? parse_poly(*c.polynomial.literal, c.n)
                          : generate_polynomial({c.n, c.polynomial.degree, c.polynomial.support, c.polynomial.density,
                                                 c.polynomial.min_degree},
                                                *c.polynomial.seed);
  const std::vector<double> exponents = o.schatten.empty() ? default_schatten_grid(c.n) : o.schatten;
  std::vector<SingularSpectrum> interiors;
  std::vector<double> labels;
  auto jsonl = out.open(".jsonl");
  auto summary = out.open("_summary.csv");
  summary << "B,rank,interior_dim,min_pivot_ratio,sigma_1,interior_sigma_1";
  for (double q : exponents) summary << ",schatten_" << q;
  summary << '\n';
  summary.precision(17);
  for (int B : o.B) {
    json rec = {{"claim", "commutator_spectrum"}, {"p", format_poly(p)}, {"B", B}, {"l", o.l}, {"t", o.t},
                {"i", o.i},                       {"j", o.j}};
    ++result.records;
    try {
      const Submodule sub = build_submodule({p, B, o.l, o.t});
      const CompressedOperator comm = compressed_commutator(sub, o.i - 1, o.j - 1);
      const SingularSpectrum full = singular_values(comm, "B=" + std::to_string(B));
      SingularSpectrum interior = interior_singular_values(comm, "B=" + std::to_string(B));
      json norms = json::object();
      for (double q : exponents) norms[std::to_string(q)] = schatten_norm(interior, q);
      rec["rank"] = sub.rank();
      rec["interior_dim"] = sub.interior_dim;
      rec["min_pivot_ratio"] = sub.min_pivot_ratio;
      rec["singular_values"] = full.values;
      rec["contaminated"] = full.contaminated;
      rec["interior_singular_values"] = interior.values;
      rec["interior_schatten"] = norms;
      jsonl << rec.dump() << '\n';

      summary << B << ',' << sub.rank() << ',' << sub.interior_dim << ',' << sub.min_pivot_ratio << ','
              << (full.values.empty() ? 0.0 : full.values[0]) << ','
              << (interior.values.empty() ? 0.0 : interior.values[0]);
      for (double q : exponents) summary << ',' << schatten_norm(interior, q);
      summary << '\n';

      auto spectrum = out.open("_spectrum_B" + std::to_string(B) + ".csv");
      write_spectrum_csv(spectrum, full);
      if (o.matrix_format == "csv") {
        auto m = out.open("_commutator_B" + std::to_string(B) + ".csv");
        write_matrix_csv(m, comm.entries);
      } else if (o.matrix_format == "binary") {
        auto m = out.open("_commutator_B" + std::to_string(B) + ".bgmx", true);
        write_matrix_binary(m, comm.entries);
      }
      interiors.push_back(std::move(interior));
      labels.push_back(B);
    } catch (const DegenerateGram& e) {
      rec["error"] = e.what();
      rec["min_pivot_ratio"] = e.ratio();
      jsonl << rec.dump() << '\n';
      ++result.failures;
      result.status = 2;
      result.message = std::string("degenerate Gram matrix at B=") + std::to_string(B) + " (see " +
                       c.output.prefix + ".jsonl record " + std::to_string(result.records) + ")";
    }
  }
  if (interiors.size() >= 2) {
    auto decay = out.open("_decay.json");
    decay << decay_report(interiors, labels, o.top_k, exponents, o.stabilization_tolerance).to_json().dump(2) << '\n';
  }
}

void run_cover(const ExperimentConfig& c, Outputs& out, RunResult& result) {
  const auto& o = c.cover;
  CoverConfig cfg;
  cfg.n = c.n;
  cfg.r = o.r;
  cfg.c = o.c;
  cfg.shrink = o.shrink;
  cfg.dilate = o.dilate;
  cfg.samples = o.samples;
  cfg.seed = *o.seed;
  cfg.threads = c.threads;
  cfg.validate();
  const auto samples = sample_shell(cfg);
  const CoverResult cover = greedy_cover(samples, cfg);
  Rng rng(derive_seed(*o.seed, 1));
  std::vector<Point> probes;
  probes.reserve(o.probes);
  for (std::size_t i = 0; i < o.probes; ++i) probes.push_back(sample_shell_point(rng, c.n, o.r));
  const OverlapStats overlap = overlap_histogram(cover_boxes(samples, cover, cfg, cfg.dilate), probes, c.threads);

  VerificationReport r;
  r.claim = "greedy_cover";
  r.parameters = {{"n", c.n}, {"r", o.r}, {"c", o.c}, {"samples", o.samples}, {"probes", o.probes}};
  r.seed = *o.seed;
  auto count_part = [&](const char* name, std::size_t value) {
    VerificationReport part;
    part.claim = r.claim;
    set_exact(part, {Rational(static_cast<long>(value)), 0}, {Rational(0), 0});
    part.relation = Relation::equal;
    part.pass = value == 0;
    part.details = {{"part", name}};
    r.parts.push_back(std::move(part));
  };
  count_part("disjointness_violations", cover.disjointness_violations);
  count_part("uncovered", cover.uncovered);
  count_part("non_monotone", cover.monotone ? 0 : 1);
  VerificationReport bound;
  bound.claim = r.claim;
  bound.kind = ScalarKind::floating;
  bound.lhs = static_cast<double>(overlap.max_multiplicity);
  bound.rhs = overlap_bound(c.n);
  bound.ratio = safe_ratio(bound.lhs, bound.rhs);
  bound.pass = bound.lhs <= bound.rhs;
  bound.details = {{"part", "overlap"}};
  r.parts.push_back(std::move(bound));
  aggregate_parts(r);
  r.details = {{"centers", cover.centers.size()}, {"undecided", cover.undecided}, {"pairs_tested", cover.pairs_tested}};

  auto csv = out.open("_cover.csv");
  write_cover_csv(csv, samples, cover, cfg);
  auto diag = out.open("_cover_diagnostics.json");
  diag << cover_diagnostics(cover, overlap, cfg).dump(2) << '\n';
  finish_reports({r}, out, result);
}

void run_constants(const ExperimentConfig& c, Outputs& out, RunResult& result) {
  const auto& o = c.constants;
  ShellConstantOptions opt;
  opt.kmax = o.k_max;
  opt.form = o.form == "weighted_norm" ? ShellForm::weighted_norm : ShellForm::shell_integral;
  opt.max_f_degree = o.f_max_degree;
  opt.support = c.polynomial.support;
  opt.threads = c.threads;
  const std::uint64_t master = derive_seed(c.seed, name_hash("constants"));
  auto jsonl = out.open(".jsonl");
  auto csv = out.open("_summary.csv");
  csv << "n,m,trials,evaluations,value,radial,tangential,partial,all_finite\n";
  csv.precision(17);
  for (int m : o.degrees) {
    const std::uint64_t s = derive_seed(master, static_cast<std::uint64_t>(m));
    const auto est = estimate_shell_constant(c.n, m, o.trials, s, opt);
    json rec = est.to_json();
    rec["claim"] = "shell_constant_estimate";
    rec["seed"] = s;
    jsonl << rec.dump() << '\n';
    csv << c.n << ',' << m << ',' << est.trials << ',' << est.evaluations << ',' << est.value << ','
        << est.family_max[0] << ',' << est.family_max[1] << ',' << est.family_max[2] << ','
        << (est.all_finite ? "true" : "false") << '\n';
    ++result.records;
    if (!est.all_finite) {
      ++result.failures;
      result.status = 1;
      result.message = "non-finite ratio for m=" + std::to_string(m);
    }
  }
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.normalize();
  RunResult result;
  Outputs out(c, result);
  {
    auto cfg = out.open("_config.json");
    cfg << config_to_json(c).dump(2) << '\n';
  }
  switch (c.kind) {
    case ExperimentKind::verify: run_verify(c, out, result); break;
    case ExperimentKind::commutator: run_commutator(c, out, result); break;
    case ExperimentKind::cover: run_cover(c, out, result); break;
    case ExperimentKind::constants: run_constants(c, out, result); break;
  }
  return result;
}

std::vector<ClaimSummary> summarize_jsonl(std::istream& in) {
  std::vector<ClaimSummary> rows;
  std::map<std::string, std::size_t> where;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error&) {
      throw std::runtime_error("line " + std::to_string(number) + " is not JSON");
    }
    if (!rec.contains("claim") || !rec.contains("pass")) continue;
    const std::string claim = rec.at("claim").get<std::string>();
    const double ratio = rec.value("ratio", json()).is_number() ? rec.at("ratio").get<double>()
                                                                : std::numeric_limits<double>::infinity();
    auto [it, fresh] = where.try_emplace(claim, rows.size());
    if (fresh) rows.push_back({claim, 0, 0, ratio, ratio, std::nullopt});
    auto& row = rows[it->second];
    ++row.count;
    if (rec.at("pass").get<bool>()) ++row.passed;
    row.max_ratio = std::max(row.max_ratio, ratio);
    row.min_ratio = std::min(row.min_ratio, ratio);
    if (rec.contains("constant") && rec.at("constant").is_number()) {
      const double k = rec.at("constant").get<double>();
      row.max_constant = std::max(row.max_constant.value_or(k), k);
    }
  }
  return rows;
}

}  // namespace bergman::cli
