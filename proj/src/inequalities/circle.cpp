#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bergman/inequalities.hpp"
#include "bergman/poly_io.hpp"

namespace bergman {

namespace {

/// Dense coefficients c_0..c_d of a one-variable polynomial.
std::vector<std::complex<double>> dense_coefficients(const FloatPoly& g) {
  if (g.dim() != 1) throw DimensionMismatch("expected a one-variable polynomial");
  std::vector<std::complex<double>> c(static_cast<std::size_t>(std::max(g.degree(), 0)) + 1, 0.0);
  for (const auto& [alpha, v] : g.terms()) c[static_cast<std::size_t>(alpha[0])] = v;
  return c;
}

std::complex<double> horner(const std::vector<std::complex<double>>& c, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// Sum of |g| over the nodes rho e^{2 pi i (k + offset)/count}, k < count.
double node_sum(const std::vector<std::complex<double>>& c, double rho, std::size_t count, double offset) {
  double s = 0.0;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(count);
  for (std::size_t k = 0; k < count; ++k) {
    s += std::abs(horner(c, std::polar(rho, step * (static_cast<double>(k) + offset))));
  }
  return s;
}

QuadratureResult trapezoid_average(const std::vector<std::complex<double>>& c, double rho, const CircleQuadrature& q) {
  std::size_t count = q.nodes;
  double sum = node_sum(c, rho, count, 0.0);
  double estimate = sum / static_cast<double>(count);
  QuadratureResult out;
  while (true) {
    // Doubling adds the midpoints of the previous nodes.
    sum += node_sum(c, rho, count, 0.5);
    count *= 2;
    const double refined = sum / static_cast<double>(count);
    out.doubling_change = std::abs(refined - estimate);
    out.value = refined;
    out.nodes = count;
    if (out.doubling_change < q.tolerance * std::max(1.0, std::abs(refined))) {
      out.converged = true;
      return out;
    }
    if (count * 2 > q.max_nodes) return out;
    estimate = refined;
  }
}

/// Arcs between the arguments of the zeros; each kink sits at an arc end,
/// where tanh-sinh clusters its nodes.
QuadratureResult arc_average(const std::vector<std::complex<double>>& c, double rho, std::vector<double> angles,
                             const CircleQuadrature& q) {
  std::sort(angles.begin(), angles.end());
  angles.push_back(angles.front() + 2.0 * std::numbers::pi);
  boost::math::quadrature::tanh_sinh<double> rule;
  auto f = [&](double th) { return std::abs(horner(c, std::polar(rho, th))); };
  QuadratureResult out;
  double total = 0.0, error = 0.0;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
    if (angles[k + 1] - angles[k] <= 0.0) continue;
    double e = 0.0;
    total += rule.integrate(f, angles[k], angles[k + 1], 1e-12, &e);
    error += e;
    ++out.arcs;
  }
  out.value = total / (2.0 * std::numbers::pi);
  out.doubling_change = error / (2.0 * std::numbers::pi);
  out.converged = out.doubling_change < q.tolerance * std::max(1.0, out.value);
  return out;
}

QuadratureResult circle_average_dense(const std::vector<std::complex<double>>& c,
                                      const std::vector<std::complex<double>>& roots, double rho,
                                      const CircleQuadrature& q) {
  if (q.nodes < 2) throw std::invalid_argument("at least two quadrature nodes are required");
  bool near = false;
  std::vector<double> angles;
  if (rho > 0) {
    for (const auto& w : roots) {
      if (std::abs(w) == 0) continue;
      near = near || std::abs(std::log(std::abs(w) / rho)) < kNearZeroLogDistance;
      angles.push_back(std::arg(w));
    }
  }
  if (!near) return trapezoid_average(c, rho, q);
  // Split at every zero: one just outside the band would otherwise leave a
  // near-kink inside an arc, where tanh-sinh converges slowly.
  return arc_average(c, rho, std::move(angles), q);
}

std::vector<std::complex<double>> roots_dense(std::vector<std::complex<double>> c) {
  std::vector<std::complex<double>> out;
  std::size_t low = 0;
  while (low < c.size() && c[low] == 0.0) ++low;
  if (low == c.size()) return out;
  out.assign(low, 0.0);
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
  const auto d = static_cast<Eigen::Index>(c.size()) - 1;
  if (d >= 1) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    for (Eigen::Index i = 0; i < d; ++i) out.push_back(solver.eigenvalues()(i));
  }
  return out;
}

}  // namespace

QuadratureResult circle_average_abs(const FloatPoly& g, double rho, const CircleQuadrature& q) {
  const auto c = dense_coefficients(g);
  return circle_average_dense(c, roots_dense(c), rho, q);
}

std::vector<std::complex<double>> polynomial_roots(const FloatPoly& g) { return roots_dense(dense_coefficients(g)); }

std::vector<double> root_moduli(const FloatPoly& g) {
  std::vector<double> out;
  for (const auto& w : polynomial_roots(g)) out.push_back(std::abs(w));
  std::sort(out.begin(), out.end());
  return out;
}

QuadratureResult disk_average_abs(const FloatPoly& g, double r, const CircleQuadrature& q) {
  if (!(r > 0)) throw std::invalid_argument("disk radius must be positive");
  const auto c = dense_coefficients(g);
  const auto roots = roots_dense(c);
  std::vector<double> breaks{0.0};
  for (const auto& w : roots) {
    const double m = std::abs(w);
    if (m > 1e-12 * r && m < r * (1 - 1e-12)) breaks.push_back(m);
  }
  breaks.push_back(r);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  boost::math::quadrature::tanh_sinh<double> rule;
  // Inner averages run tighter so their residual stays well inside the disk tolerance.
  CircleQuadrature inner = q;
  inner.tolerance = q.tolerance * 1e-2;
  // The worst inner change enters the disk's own change estimate, so an inner
  // average that stops short of its (tighter) target is still accounted for.
  double inner_change = 0.0;
  auto f = [&](double rho) {
    const auto a = circle_average_dense(c, roots, rho, inner);
    inner_change = std::max(inner_change, a.doubling_change);
    return rho * a.value;
  };
  double total = 0.0, error = 0.0;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    double e = 0.0;
    total += rule.integrate(f, breaks[s], breaks[s + 1], 1e-12, &e);
    error += e;
  }
  QuadratureResult out;
  out.value = 2.0 * total / (r * r);
  out.doubling_change = 2.0 * error / (r * r) + inner_change;
  out.nodes = q.nodes;
  out.arcs = breaks.size() - 1;
  out.converged = std::isfinite(out.value) && out.doubling_change < q.tolerance * std::max(1.0, std::abs(out.value));
  return out;
}

VerificationReport verify_circle_derivative_bound(const ExactPoly& p, const ExactPoly& f, int l, int m, double r,
                                                  const CircleQuadrature& q) {
  if (p.dim() != 1 || f.dim() != 1) throw DimensionMismatch("one-variable polynomials expected");
  if (!(1 <= l && l <= m)) throw std::invalid_argument("need 1 <= l <= m");
  if (p.degree() > m) throw std::invalid_argument("m must be at least deg p");
  if (!(r > 0 && r <= 1)) throw std::invalid_argument("r must lie in (0, 1]");

  VerificationReport rep;
  rep.claim = "circle_derivative_bound";
  rep.parameters = {{"p", format_poly(p)}, {"f", format_poly(f)}, {"l", l}, {"m", m}, {"r", r}};

  const std::complex<double> pl = p.coefficient(MultiIndex{l}).to_complex() * to_double(Rational(factorial(l)));
  const std::complex<double> f0 = f.coefficient(MultiIndex{0}).to_complex();
  const double value = std::abs(pl * f0);
  const double falling = to_double(Rational(factorial(m)) / Rational(factorial(m - l)));
  const FloatPoly g = to_float(p * f);

  const auto circle = circle_average_abs(g, 1.0, q);
  VerificationReport first;
  first.claim = rep.claim;
  set_float(first, value, falling * circle.value, kQuadratureTolerance);
  first.pass = first.pass && circle.converged;
  first.details = {{"part", "circle"},
                   {"nodes", circle.nodes},
                   {"doubling_change", circle.doubling_change},
                   {"converged", circle.converged}};
  rep.parts.push_back(std::move(first));

  const auto disk = disk_average_abs(g, r, q);
  VerificationReport second;
  second.claim = rep.claim;
  set_float(second, std::pow(r, l) * value, (l + 2) * falling / 2.0 * disk.value, kQuadratureTolerance);
  second.pass = second.pass && disk.converged;
  second.details = {{"part", "disk"},
                    {"nodes", disk.nodes},
                    {"doubling_change", disk.doubling_change},
                    {"converged", disk.converged}};
  rep.parts.push_back(std::move(second));
  aggregate_parts(rep);
  return rep;
}

}  // namespace bergman
