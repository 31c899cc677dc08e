#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bergman/multi_index.hpp"
#include "bergman/polynomial.hpp"
#include "bergman/random.hpp"
#include "bergman/report.hpp"

namespace bergman {

// --- series identity for the commutator [M*_{z_j}, M_p] -------------------

/// p = z^alpha, f = z^beta: the commutator M*_{z_j} M_p f - M_p M*_{z_j} f
/// against the closed-form coefficient (equality), plus one part per
/// truncation K' = 1..K checking |S_K' - lhs| <= c rho^K' / ((n+|a|+|b|)(1-rho)).
VerificationReport verify_commutator_series(const MultiIndex& alpha, const MultiIndex& beta, std::size_t j,
                                            int K = 30);

/// Closed-form coefficient of z^{alpha+beta-e_j}.
Rational commutator_series_coefficient(const MultiIndex& alpha, const MultiIndex& beta, std::size_t j);

/// k-th series term (N+1+n)^{-(k+1)} [d_j R^k p . f - M*_{z_j}(R^{k+1} p . f)].
ExactPoly commutator_series_term(const ExactPoly& p, const ExactPoly& f, std::size_t j, int k);

// --- number-operator weights ----------------------------------------------

/// ||(N+1+n)^{-s} f||^2 in the unweighted space, summed over homogeneous parts.
Rational number_operator_weighted_norm_sq(const ExactPoly& f, int two_s);

/// Squared Bergman norm of f in the weight-t space (normalized measure).
Rational weighted_norm_sq(const ExactPoly& f, int t);

/// Both bounds (f vanishing to order l at 0): part "first" and one part
/// "second" per coordinate j.
VerificationReport verify_number_operator_bounds(const ExactPoly& f, int k, int l);

// --- weighted shell estimates ----------------------------------------------

enum class ShellFamily { radial = 1, tangential = 2, partial = 3 };

/// The left-hand region: the shell {|z| > 1/2} for the integral form, the
/// whole ball for the weighted-norm form (the c_t factors cancel there).
enum class ShellForm { shell_integral, weighted_norm };

struct ShellQuery {
  ShellFamily family = ShellFamily::radial;
  int k = 0;
  /// Radial family: order of R, 0 <= l <= k.
  int l = 0;
  /// Tangential family uses L_{j,i}; partial family uses d_j.
  std::size_t i = 1;
  std::size_t j = 0;
  ShellForm form = ShellForm::shell_integral;
};

std::string claim_id(ShellFamily family);

/// Exact integrals of the query's ratio. The per-k constant is
/// ratio^{1/(k+1)}; passes when ratio <= cap^{k+1} (decided in logs).
VerificationReport verify_shell_bound(const ExactPoly& p, const ExactPoly& f, const ShellQuery& q, double cap);

/// The constant produced by the covering argument for the tangential
/// family, (24^{n+1} m^2 N(n) / c)^{...} with N(n) = 200^{6n+6} and c the
/// covering margin 1/(10 * 200^3). Only a sanity reference.
double reference_shell_cap(std::size_t n, int m);

struct ShellConstantOptions {
  int kmax = 6;
  ShellForm form = ShellForm::shell_integral;
  /// deg f is drawn uniformly from [0, max_f_degree].
  int max_f_degree = 2;
  SupportModel support = SupportModel::dense;
  unsigned threads = 1;
};

struct ShellConstantEstimate {
  std::size_t n = 0;
  int m = 0;
  double value = 0.0;
  /// Per family (index family - 1) maximum of ratio^{1/(k+1)}.
  double family_max[3] = {0.0, 0.0, 0.0};
  bool all_finite = true;
  std::size_t trials = 0;
  std::size_t evaluations = 0;
  /// Parameters of the maximizing query: trial, seed, family, k, l, i, j, p, f.
  nlohmann::json argmax;

  nlohmann::json to_json() const;
};

/// Max of ratio^{1/(k+1)} over random (p, f), k <= kmax, all families.
ShellConstantEstimate estimate_shell_constant(std::size_t n, int m, std::size_t trials, std::uint64_t seed,
                                              const ShellConstantOptions& options = {});

// --- series term bound --------------------------------------------------------

/// ||(N+1+n)^{-k-1/2}[M_{d_j R^k p} - M*_{z_j} M_{R^{k+1} p}] f||^2 (exact).
Rational series_term_norm_sq(const ExactPoly& p, const ExactPoly& f, std::size_t j, int k);

/// Squared comparison against (n+1)(n+2k+2+l)^{(l+n)/2} C^{k+1} / (l+n)^{k+1/2} ||pf||
/// with C taken as the exact rational value of `constant`. Details also
/// record the same test with C^{k+2}.
VerificationReport verify_series_term_bound(const ExactPoly& p, const ExactPoly& f, std::size_t j, int k, int l,
                                            double constant);

/// Terms k = 0..kmax: each per-term check as a part; details carry the term
/// norms, bound ratios and whether the bounds decay geometrically
/// (C / (l+n) <= 1/2 and every consecutive bound ratio < 1 from some k on).
VerificationReport verify_series_aggregate(const ExactPoly& p, const ExactPoly& f, std::size_t j, int l,
                                           double constant, int kmax);

// --- mass near the boundary and dilations -----------------------------------

/// int_B |f|^2 (1-|z|^2)^t dm <= 3^{t+1} int_{|z|>1/2} |f|^2 (1-|z|^2)^t dm.
VerificationReport verify_shell_mass(const ExactPoly& f, int t);

/// int |f_r p|^2 dm <= 2^{2(m+n-1)} int |f p|^2 dm, f_r(z) = f(rz), 1/2 < r < 1.
VerificationReport verify_dilation_bound(const ExactPoly& p, const ExactPoly& f, const Rational& r);

// --- one-variable derivative bounds -------------------------------------------

struct CircleQuadrature {
  /// Starting node count of the trapezoidal rule.
  std::size_t nodes = 64;
  std::size_t max_nodes = std::size_t{1} << 22;
  /// Doubling stops once successive estimates differ by less than this.
  double tolerance = 1e-10;
};

struct QuadratureResult {
  double value = 0.0;
  /// Change between the last two refinements, each doubling the node count
  /// (trapezoid nodes, or tanh-sinh levels on split arcs and radii).
  double doubling_change = 0.0;
  /// Trapezoid nodes; 0 when the circle was split into arcs.
  std::size_t nodes = 0;
  /// Circle: arcs used when zeros of g lie close to it. Disk: radial segments.
  std::size_t arcs = 0;
  bool converged = false;
};

/// Zeros closer than this in |log(|w| / rho)| switch the circle average from
/// the trapezoidal rule to tanh-sinh on arcs split at their arguments.
inline constexpr double kNearZeroLogDistance = 0.05;

/// (1/2pi) int |g(rho e^{i theta})| d theta: trapezoidal rule with node
/// doubling, or split arcs when a zero is near the circle (the trapezoid
/// then converges only like exp(-N |log(|w|/rho)|)).
QuadratureResult circle_average_abs(const FloatPoly& g, double rho, const CircleQuadrature& q = {});

/// (1/(pi r^2)) int_{|z|<r} |g| dm: tanh-sinh in the radius (split at the
/// moduli of the zeros of g) over circle averages.
QuadratureResult disk_average_abs(const FloatPoly& g, double r, const CircleQuadrature& q = {});

/// Zeros of a one-variable polynomial (companion matrix; exact zeros at the origin).
std::vector<std::complex<double>> polynomial_roots(const FloatPoly& g);

/// Moduli of the zeros of a one-variable polynomial (companion matrix).
std::vector<double> root_moduli(const FloatPoly& g);

/// Parts "circle": |d^l p(0) f(0)| <= m!/(m-l)! avg_T |pf|, and
/// "disk": r^l |d^l p(0) f(0)| <= (l+2) m! / (2 (m-l)!) avg_{rD} |pf|,
/// each within 1e-8 * max(1, rhs). Non-convergent quadrature fails the part.
VerificationReport verify_circle_derivative_bound(const ExactPoly& p, const ExactPoly& f, int l, int m, double r,
                                                  const CircleQuadrature& q = {});

inline constexpr double kQuadratureTolerance = 1e-8;

// --- pointwise identity ---------------------------------------------------------

/// d_j p - conj(z_j) R p = (1-|z|^2) d_j p + sum_{i != j} z_i L_{j,i} p:
/// symbolic equality as mixed polynomials, and a float residual at `points`
/// seeded random points of the ball (pass below 1e-12 relative to scale).
VerificationReport verify_radial_tangential_identity(const ExactPoly& p, std::size_t j, std::size_t points,
                                                     std::uint64_t seed);

}  // namespace bergman
