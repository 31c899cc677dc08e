#include <cmath>
#include <limits>
#include <stdexcept>

#include "bergman/inequalities.hpp"
#include "bergman/moments.hpp"
#include "bergman/parallel.hpp"
#include "bergman/poly_io.hpp"

namespace bergman {

namespace {

const Rational kHalf = make_rational(1, 2);

double log_of(const Rational& q) {
  // Exact ratios can leave the double range only in contrived inputs; the
  // mantissa/exponent split keeps the log finite in any case.
  long exp_num = 0, exp_den = 0;
  const double num = mpz_get_d_2exp(&exp_num, q.get_num_mpz_t());
  const double den = mpz_get_d_2exp(&exp_den, q.get_den_mpz_t());
  return std::log(num / den) + static_cast<double>(exp_num - exp_den) * std::log(2.0);
}

struct ShellIntegrals {
  PiValue lhs;
  PiValue rhs;
};

ShellIntegrals shell_integrals(const ExactPoly& p, const ExactPoly& f, const ShellQuery& q) {
  p.check_dim(f);
  const ExactPoly pf = p * f;
  if (pf.is_zero()) throw std::invalid_argument("p f vanishes identically; the ratio is undefined");
  if (q.k < 0) throw std::invalid_argument("k must be non-negative");
  const Region lhs_region = q.form == ShellForm::shell_integral ? Region::shell(kHalf) : Region::ball();
  const Region ball = Region::ball();
  switch (q.family) {
    case ShellFamily::radial: {
      if (q.l < 0 || q.l > q.k) throw std::invalid_argument("radial family needs 0 <= l <= k");
      return {weighted_l2_sq(radial_power(p, q.l) * f, 2 * q.k, lhs_region),
              weighted_l2_sq(pf, 2 * q.k - 2 * q.l, ball)};
    }
    case ShellFamily::tangential: {
      const ExactMixedPoly h = tangential_derivative(p, q.j, q.i) * f;
      return {weighted_l2_sq(h, 2 * q.k + 1, lhs_region), weighted_l2_sq(pf, 2 * q.k, ball)};
    }
    case ShellFamily::partial: {
      return {weighted_l2_sq(partial_derivative(p, q.j) * f, 2 * q.k + 2, lhs_region),
              weighted_l2_sq(pf, 2 * q.k, ball)};
    }
  }
  throw std::invalid_argument("unknown inequality family");
}

nlohmann::json query_json(const ShellQuery& q) {
  nlohmann::json j = {{"family", static_cast<int>(q.family)},
                      {"k", q.k},
                      {"form", q.form == ShellForm::shell_integral ? "shell_integral" : "weighted_norm"}};
  if (q.family == ShellFamily::radial) j["l"] = q.l;
  if (q.family == ShellFamily::tangential) j["i"] = q.i + 1;
  if (q.family != ShellFamily::radial) j["j"] = q.j + 1;
  return j;
}

}  // namespace

std::string claim_id(ShellFamily family) {
  switch (family) {
    case ShellFamily::radial:
      return "shell_radial_bound";
    case ShellFamily::tangential:
      return "shell_tangential_bound";
    case ShellFamily::partial:
      return "shell_partial_bound";
  }
  return "shell_bound";
}

double reference_shell_cap(std::size_t n, int m) {
  const double dn = static_cast<double>(n);
  const double N = std::pow(200.0, 6.0 * dn + 6.0);
  const double c = 1.0 / (10.0 * std::pow(200.0, 3.0));
  const double mm = std::max(m, 1);
  return std::pow(24.0, dn + 1.0) * mm * mm * N / c;
}

VerificationReport verify_shell_bound(const ExactPoly& p, const ExactPoly& f, const ShellQuery& q, double cap) {
  if (!(cap > 0)) throw std::invalid_argument("cap must be positive");
  const auto [lhs, rhs] = shell_integrals(p, f, q);
  VerificationReport r;
  r.claim = claim_id(q.family);
  r.parameters = query_json(q);
  r.parameters["n"] = p.dim();
  r.parameters["p"] = format_poly(p);
  r.parameters["f"] = format_poly(f);
  set_exact(r, lhs, rhs);
  const double log_ratio = sgn(lhs.coefficient) == 0 ? -std::numeric_limits<double>::infinity()
                                                     : log_of(exact_ratio(lhs, rhs));
  r.constant = std::exp(log_ratio / (q.k + 1));
  r.pass = std::isfinite(r.ratio) && log_ratio <= (q.k + 1) * std::log(cap);
  r.details = {{"cap", cap}, {"log_ratio", std::isfinite(log_ratio) ? nlohmann::json(log_ratio) : nlohmann::json()}};
  return r;
}

nlohmann::json ShellConstantEstimate::to_json() const {
  return {{"n", n},
          {"m", m},
          {"value", value},
          {"family_max", {family_max[0], family_max[1], family_max[2]}},
          {"all_finite", all_finite},
          {"trials", trials},
          {"evaluations", evaluations},
          {"argmax", argmax},
          {"reference_cap", reference_shell_cap(n, m)}};
}

namespace {

struct TrialMax {
  double value = 0.0;
  double family_max[3] = {0.0, 0.0, 0.0};
  bool all_finite = true;
  std::size_t evaluations = 0;
  nlohmann::json argmax;
};

std::vector<ShellQuery> trial_queries(std::size_t n, int kmax, ShellForm form) {
  std::vector<ShellQuery> qs;
  for (int k = 0; k <= kmax; ++k) {
    for (int l = 0; l <= k; ++l) qs.push_back({ShellFamily::radial, k, l, 1, 0, form});
    for (std::size_t j = 0; j < n; ++j) {
      // |L_{j,i}|^2 is symmetric in (i, j), so unordered pairs suffice.
      for (std::size_t i = j + 1; i < n; ++i) qs.push_back({ShellFamily::tangential, k, 0, i, j, form});
    }
    for (std::size_t j = 0; j < n; ++j) qs.push_back({ShellFamily::partial, k, 0, 1, j, form});
  }
  return qs;
}

}  // namespace

ShellConstantEstimate estimate_shell_constant(std::size_t n, int m, std::size_t trials, std::uint64_t seed,
                                              const ShellConstantOptions& options) {
  if (trials < 1) throw std::invalid_argument("at least one trial is required");
  if (m < 0 || options.kmax < 0 || options.max_f_degree < 0) throw std::invalid_argument("negative degree");
  const auto queries = trial_queries(n, options.kmax, options.form);

  auto task = [&](std::size_t trial, std::uint64_t trial_seed) {
    SplitMix64 sub(trial_seed);
    const ExactPoly p = generate_polynomial({n, m, options.support}, sub.next());
    Rng pick(sub.next());
    const int df = static_cast<int>(pick.index(static_cast<std::size_t>(options.max_f_degree) + 1));
    const ExactPoly f = generate_polynomial({n, df, options.support}, sub.next());
    TrialMax out;
    for (const auto& q : queries) {
      const auto [lhs, rhs] = shell_integrals(p, f, q);
      ++out.evaluations;
      if (sgn(lhs.coefficient) == 0) continue;
      const double c = std::exp(log_of(exact_ratio(lhs, rhs)) / (q.k + 1));
      if (!std::isfinite(c)) out.all_finite = false;
      double& fam = out.family_max[static_cast<int>(q.family) - 1];
      fam = std::max(fam, c);
      if (c > out.value) {
        out.value = c;
        out.argmax = query_json(q);
        out.argmax["trial"] = trial;
        out.argmax["seed"] = trial_seed;
        out.argmax["p"] = format_poly(p);
        out.argmax["f"] = format_poly(f);
      }
    }
    return out;
  };
  const auto results = run_trials(trials, seed, task, options.threads);

  ShellConstantEstimate e;
  e.n = n;
  e.m = m;
  e.trials = trials;
  for (const auto& t : results) {
    e.all_finite = e.all_finite && t.all_finite;
    e.evaluations += t.evaluations;
    for (int k = 0; k < 3; ++k) e.family_max[k] = std::max(e.family_max[k], t.family_max[k]);
    if (t.value > e.value) {
      e.value = t.value;
      e.argmax = t.argmax;
    }
  }
  return e;
}

VerificationReport verify_shell_mass(const ExactPoly& f, int t) {
  if (f.is_zero()) throw std::invalid_argument("f must be nonzero");
  if (t < 0) throw std::invalid_argument("t must be non-negative");
  VerificationReport r;
  r.claim = "shell_mass_bound";
  r.parameters = {{"n", f.dim()}, {"f", format_poly(f)}, {"t", t}};
  PiValue rhs = weighted_l2_sq(f, t, Region::shell(kHalf));
  rhs.coefficient *= pow(Rational(3), t + 1);
  set_exact(r, weighted_l2_sq(f, t, Region::ball()), rhs);
  return r;
}

VerificationReport verify_dilation_bound(const ExactPoly& p, const ExactPoly& f, const Rational& r_value) {
  if (p.is_zero()) throw std::invalid_argument("p must be nonzero");
  if (!(r_value > kHalf && r_value < 1)) throw std::invalid_argument("dilation needs 1/2 < r < 1");
  p.check_dim(f);
  const int m = p.degree();
  const int n = static_cast<int>(p.dim());
  VerificationReport r;
  r.claim = "dilation_bound";
  r.parameters = {{"n", n}, {"p", format_poly(p)}, {"f", format_poly(f)}, {"r", to_string(r_value)}};
  const ExactPoly fr = dilate(f, QComplex(r_value));
  PiValue rhs = weighted_l2_sq(p * f, 0, Region::ball());
  rhs.coefficient *= pow(Rational(2), 2 * (m + n - 1));
  set_exact(r, weighted_l2_sq(p * fr, 0, Region::ball()), rhs);
  return r;
}

VerificationReport verify_radial_tangential_identity(const ExactPoly& p, std::size_t j, std::size_t points,
                                                     std::uint64_t seed) {
  const std::size_t n = p.dim();
  if (j >= n) throw std::out_of_range("coordinate out of range");
  VerificationReport r;
  r.claim = "radial_tangential_identity";
  r.parameters = {{"n", n}, {"p", format_poly(p)}, {"j", j + 1}, {"points", points}};
  r.seed = seed;

  const ExactPoly dj = partial_derivative(p, j);
  const ExactPoly rp = radial_derivative(p);
  std::vector<ExactMixedPoly> tangential;
  ExactMixedPoly lhs = ExactMixedPoly(dj) - ExactMixedPoly::conj_variable(n, j) * rp;
  ExactMixedPoly rhs = ExactMixedPoly::one_minus_norm_sq(n) * dj;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) continue;
    tangential.push_back(tangential_derivative(p, j, i));
    rhs += ExactMixedPoly::variable(n, i) * tangential.back();
  }
  VerificationReport symbolic;
  symbolic.claim = r.claim;
  symbolic.relation = Relation::equal;
  const ExactMixedPoly diff = lhs - rhs;
  symbolic.details = {{"part", "symbolic"}, {"lhs_terms", lhs.terms().size()}, {"rhs_terms", rhs.terms().size()}};
  // lhs: number of coefficients in which the two expansions differ.
  set_exact(symbolic, {Rational(static_cast<long>(diff.terms().size())), 0}, {Rational(0), 0});
  r.parts.push_back(std::move(symbolic));

  // Pointwise, each side assembled from separately evaluated pieces.
  const FloatPoly fdj = to_float(dj), frp = to_float(rp);
  std::vector<FloatMixedPoly> ftan;
  for (const auto& t : tangential) ftan.push_back(to_float(t));
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < points; ++s) {
    const auto z = rng.ball_point(n);
    double norm_sq = 0.0;
    for (const auto& c : z) norm_sq += std::norm(c);
    const std::complex<double> a = fdj.evaluate(z), b = frp.evaluate(z);
    const std::complex<double> left = a - std::conj(z[j]) * b;
    std::complex<double> right = (1.0 - norm_sq) * a;
    double scale = std::abs(a) + std::abs(b);
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const std::complex<double> term = z[i] * ftan[t++].evaluate(z);
      right += term;
      scale += std::abs(term);
    }
    worst = std::max(worst, std::abs(left - right) / std::max(1.0, scale));
  }
  VerificationReport pointwise;
  pointwise.claim = r.claim;
  pointwise.details = {{"part", "pointwise"}};
  set_float(pointwise, worst, 1e-12, 0.0);
  r.parts.push_back(std::move(pointwise));
  aggregate_parts(r);
  return r;
}

}  // namespace bergman
