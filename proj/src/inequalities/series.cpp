#include <cmath>
#include <stdexcept>

#include "bergman/inequalities.hpp"
#include "bergman/moments.hpp"
#include "bergman/operators.hpp"
#include "bergman/poly_io.hpp"

namespace bergman {

namespace {

nlohmann::json index_json(const MultiIndex& a) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i]);
  return out;
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

/// Scales each homogeneous part of degree d by (d+1+n)^{-power}.
ExactPoly apply_number_weight(const ExactPoly& g, int power) {
  const int n = static_cast<int>(g.dim());
  ExactPoly out(g.dim());
  for (const auto& [alpha, c] : g.terms()) {
    out.add_term(alpha, c * QComplex(Rational(1) / pow(Rational(alpha.degree() + 1 + n), power)));
  }
  return out;
}

PiValue real(const Rational& q) { return {q, 0}; }

}  // namespace

Rational commutator_series_coefficient(const MultiIndex& alpha, const MultiIndex& beta, std::size_t j) {
  const int n = static_cast<int>(alpha.size());
  const int a = alpha.degree(), b = beta.degree();
  return Rational(alpha[j] * (n + b) - beta[j] * a) / Rational((n + a + b) * (n + b));
}

ExactPoly commutator_series_term(const ExactPoly& p, const ExactPoly& f, std::size_t j, int k) {
  const ExactPoly rk = radial_power(p, k);
  ExactPoly g = partial_derivative(rk, j) * f;
  g -= coordinate_adjoint_apply(radial_derivative(rk) * f, j, 0);
  return apply_number_weight(g, k + 1);
}

VerificationReport verify_commutator_series(const MultiIndex& alpha, const MultiIndex& beta, std::size_t j, int K) {
  if (alpha.size() != beta.size()) throw DimensionMismatch("multi-indices of different dimension");
  if (j >= alpha.size()) throw std::out_of_range("coordinate out of range");
  if (K < 1) throw std::invalid_argument("truncation must be at least one term");
  const std::size_t n = alpha.size();
  const ExactPoly p = ExactPoly::monomial(alpha), f = ExactPoly::monomial(beta);

  VerificationReport r;
  r.claim = "commutator_series_identity";
  r.parameters = {{"n", n}, {"alpha", index_json(alpha)}, {"beta", index_json(beta)}, {"j", j + 1}, {"K", K}};

  ExactPoly lhs = coordinate_adjoint_apply(p * f, j, 0);
  lhs -= p * coordinate_adjoint_apply(f, j, 0);
  const bool has_target = alpha[j] + beta[j] > 0;
  const MultiIndex target = has_target ? (alpha + beta).lowered(j) : alpha + beta;
  const Rational lhs_coef = has_target ? lhs.coefficient(target).re : Rational(0);
  const bool single_term = lhs.is_zero() || (has_target && lhs.term_count() == 1 &&
                                             lhs.terms().begin()->first == target &&
                                             lhs.terms().begin()->second.is_real());
  const Rational closed = commutator_series_coefficient(alpha, beta, j);

  VerificationReport identity;
  identity.claim = r.claim;
  identity.relation = Relation::equal;
  identity.details = {{"part", "closed_form"}, {"single_term", single_term}};
  set_exact(identity, real(lhs_coef), real(closed));
  identity.pass = identity.pass && single_term;

  // Series: term k has coefficient |a|^k / (n+|a|+|b|)^{k+1} * c, so the tail
  // after K' terms is |c| rho^K' / ((n+|a|+|b|)(1 - rho)).
  const int a = alpha.degree(), b = beta.degree();
  const Rational big(static_cast<long>(n) + a + b);
  const Rational rho = Rational(a) / big;
  const Rational c = Rational(alpha[j]) - Rational(a * (alpha[j] + beta[j])) / big;
  ExactPoly partial(n);
  VerificationReport tail;
  tail.claim = r.claim;
  bool tail_ok = true, terms_ok = true;
  Rational worst_ratio = -1;
  for (int k = 0; k < K; ++k) {
    partial += commutator_series_term(p, f, j, k);
    terms_ok = terms_ok && (partial.is_zero() || (has_target && partial.term_count() == 1 &&
                                                  partial.terms().begin()->first == target));
    const Rational diff = abs(partial.coefficient(target).re - lhs_coef);
    const Rational bound = abs(c) * pow(rho, k + 1) / (big * (Rational(1) - rho));
    const bool ok = diff <= bound;
    tail_ok = tail_ok && ok;
    const Rational ratio = sgn(bound) == 0 ? (sgn(diff) == 0 ? Rational(0) : Rational(1) + diff) : diff / bound;
    if (ratio > worst_ratio || !ok) {
      worst_ratio = ratio;
      set_exact(tail, real(diff), real(bound));
      tail.details = {{"part", "geometric_tail"}, {"worst_K", k + 1}};
    }
  }
  tail.pass = tail_ok && terms_ok;
  tail.details["checked_truncations"] = K;
  tail.details["single_term"] = terms_ok;

  r.parts = {std::move(identity), std::move(tail)};
  aggregate_parts(r);
  return r;
}

Rational weighted_norm_sq(const ExactPoly& f, int t) {
  Rational total;
  for (const auto& [alpha, c] : f.terms()) total += c.norm() * monomial_norm_sq(alpha, t);
  return total;
}

Rational number_operator_weighted_norm_sq(const ExactPoly& f, int two_s) {
  const int n = static_cast<int>(f.dim());
  Rational total;
  for (const auto& [alpha, c] : f.terms()) {
    total += c.norm() * monomial_norm_sq(alpha, 0) / pow(Rational(alpha.degree() + 1 + n), two_s);
  }
  return total;
}

VerificationReport verify_number_operator_bounds(const ExactPoly& f, int k, int l) {
  if (f.is_zero()) throw std::invalid_argument("f must be nonzero");
  if (k < 0 || l < 0) throw std::invalid_argument("k and l must be non-negative");
  if (f.min_degree() < l) throw std::invalid_argument("f must vanish to order l at the origin");
  const int n = static_cast<int>(f.dim());

  VerificationReport r;
  r.claim = "number_operator_weight_bounds";
  r.parameters = {{"n", n}, {"f", format_poly(f)}, {"k", k}, {"l", l}};

  VerificationReport first;
  first.claim = r.claim;
  first.details = {{"part", "first"}};
  {
    const Rational lhs = number_operator_weighted_norm_sq(f, 2 * k + 1);
    const Rational factor = pow(Rational(n + 2 * k + 1 + l), l) / pow(Rational(l + 1 + n), 2 * k + 1);
    set_exact(first, real(lhs), real(factor * weighted_norm_sq(f, 2 * k + 1)));
  }
  r.parts.push_back(std::move(first));

  const Rational second_rhs = pow(Rational(n + 2 * k + 2 + l), l) / pow(Rational(l + n), 2 * k + 1) *
                              weighted_norm_sq(f, 2 * k + 2);
  for (std::size_t j = 0; j < f.dim(); ++j) {
    ExactPoly g = coordinate_adjoint_apply(f, j, 0);
    g -= coordinate_adjoint_apply(f, j, 2 * k + 1);
    VerificationReport second;
    second.claim = r.claim;
    second.details = {{"part", "second"}, {"j", j + 1}};
    set_exact(second, real(number_operator_weighted_norm_sq(g, 2 * k + 1)), real(second_rhs));
    r.parts.push_back(std::move(second));
  }
  aggregate_parts(r);
  return r;
}

Rational series_term_norm_sq(const ExactPoly& p, const ExactPoly& f, std::size_t j, int k) {
  const ExactPoly rk = radial_power(p, k);
  ExactPoly g = partial_derivative(rk, j) * f;
  g -= coordinate_adjoint_apply(radial_derivative(rk) * f, j, 0);
  return number_operator_weighted_norm_sq(g, 2 * k + 1);
}

namespace {

/// Squared bound without the constant: (n+1)^2 (n+2k+2+l)^{l+n} / (l+n)^{2k+1} ||pf||^2.
Rational series_bound_base(std::size_t dim, int k, int l, const Rational& pf_norm_sq) {
  const int n = static_cast<int>(dim);
  return Rational((n + 1) * (n + 1)) * pow(Rational(n + 2 * k + 2 + l), l + n) / pow(Rational(l + n), 2 * k + 1) *
         pf_norm_sq;
}

}  // namespace

VerificationReport verify_series_term_bound(const ExactPoly& p, const ExactPoly& f, std::size_t j, int k, int l,
                                            double constant) {
  if (j >= p.dim()) throw std::out_of_range("coordinate out of range");
  if (k < 0 || l < 0) throw std::invalid_argument("k and l must be non-negative");
  if (!f.is_zero() && f.min_degree() < l) throw std::invalid_argument("f must vanish to order l at the origin");
  if (!(constant > 0) || !std::isfinite(constant)) throw std::invalid_argument("constant must be positive");
  p.check_dim(f);
  const Rational C(constant);

  VerificationReport r;
  r.claim = "series_term_bound";
  r.parameters = {{"n", p.dim()}, {"p", format_poly(p)}, {"f", format_poly(f)}, {"j", j + 1},
                  {"k", k},       {"l", l},              {"constant", constant}};
  r.constant = constant;
  const Rational lhs = series_term_norm_sq(p, f, j, k);
  const Rational base = series_bound_base(p.dim(), k, l, weighted_norm_sq(p * f, 0));
  set_exact(r, real(lhs), real(base * pow(C, 2 * k + 2)));
  r.details = {{"squared", true}, {"pass_with_exponent_k_plus_2", lhs <= base * pow(C, 2 * k + 4)}};
  return r;
}

VerificationReport verify_series_aggregate(const ExactPoly& p, const ExactPoly& f, std::size_t j, int l,
                                           double constant, int kmax) {
  if (kmax < 0) throw std::invalid_argument("kmax must be non-negative");
  VerificationReport r;
  r.claim = "series_term_bound";
  r.parameters = {{"n", p.dim()}, {"p", format_poly(p)}, {"f", format_poly(f)}, {"j", j + 1},
                  {"l", l},       {"kmax", kmax},        {"constant", constant}, {"mode", "aggregate"}};
  r.constant = constant;
  std::vector<double> terms, bounds;
  for (int k = 0; k <= kmax; ++k) {
    r.parts.push_back(verify_series_term_bound(p, f, j, k, l, constant));
    terms.push_back(std::sqrt(r.parts.back().lhs));
    bounds.push_back(std::sqrt(r.parts.back().rhs));
  }
  std::vector<double> term_ratios, bound_ratios;
  for (std::size_t k = 0; k + 1 < terms.size(); ++k) {
    term_ratios.push_back(safe_ratio(terms[k + 1], terms[k]));
    bound_ratios.push_back(safe_ratio(bounds[k + 1], bounds[k]));
  }
  const bool condition = static_cast<double>(static_cast<int>(p.dim()) + l) >= 2.0 * constant;
  bool decaying = !bound_ratios.empty();
  for (std::size_t k = bound_ratios.size() / 2; k < bound_ratios.size(); ++k) {
    decaying = decaying && bound_ratios[k] < 1.0;
  }
  double bound_sum = 0.0, term_sum = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    bound_sum += bounds[k];
    term_sum += terms[k];
  }
  aggregate_parts(r);
  r.details = {{"term_norms", terms},       {"bounds", bounds},         {"term_ratios", term_ratios},
               {"bound_ratios", bound_ratios}, {"term_sum", term_sum}, {"bound_sum", bound_sum},
               {"condition_met", condition},   {"geometric", condition && decaying}};
  return r;
}

}  // namespace bergman
