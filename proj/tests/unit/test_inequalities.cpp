#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bergman/inequalities.hpp"
#include "bergman/operators.hpp"
#include "bergman/parallel.hpp"
#include "bergman/poly_io.hpp"

using namespace bergman;

namespace {

Rational q(long a, long b) { return make_rational(a, b); }

// int_lo^1 u^a (1-u)^b du by expanding (1-u)^b, written out independently.
Rational beta_tail(int a, int b, const Rational& lo) {
  Rational total;
  for (int i = 0; i <= b; ++i) {
    const Rational c = Rational(binomial(b, i)) * (i % 2 ? -1 : 1) / Rational(a + i + 1);
    total += c * (Rational(1) - pow(lo, a + i + 1));
  }
  return total;
}

// (1/2pi) int |g(e^{i theta})| by adaptive Gauss-Kronrod.
double gk_circle_average(const ExactPoly& g) {
  const FloatPoly fg = to_float(g);
  auto h = [&](double th) {
    const std::complex<double> z = std::polar(1.0, th);
    return std::abs(fg.evaluate(std::span<const std::complex<double>>(&z, 1)));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(h, 0.0, 2 * std::numbers::pi, 10, 1e-14) /
         (2 * std::numbers::pi);
}

}  // namespace

TEST(CommutatorSeries, ExampleAndOracle) {
  const MultiIndex a{2, 0}, b{1, 0};
  auto r = verify_commutator_series(a, b, 0, 30);
  EXPECT_TRUE(r.pass);
  ASSERT_TRUE(r.parts[0].exact_lhs);
  EXPECT_EQ(r.parts[0].exact_lhs->coefficient, q(4, 15));
  // (a_j + b_j)/(n+|a|+|b|) - b_j/(n+|b|): the two adjoint actions separately
  for (std::size_t n = 1; n <= 2; ++n) {
    for (const auto& al : enumerate_multi_indices(n, 3)) {
      for (const auto& be : enumerate_multi_indices(n, 3)) {
        for (std::size_t j = 0; j < n; ++j) {
          const long N = static_cast<long>(n);
          const Rational oracle = Rational(al[j] + be[j]) / Rational(N + al.degree() + be.degree()) -
                                  Rational(be[j]) / Rational(N + be.degree());
          auto rep = verify_commutator_series(al, be, j, 12);
          EXPECT_TRUE(rep.pass) << al.to_string() << be.to_string();
          EXPECT_EQ(rep.parts[0].exact_lhs->coefficient, oracle);
        }
      }
    }
  }
}

TEST(CommutatorSeries, TrivialCases) {
  auto constant = verify_commutator_series(MultiIndex{0, 0}, MultiIndex{1, 2}, 1, 5);
  EXPECT_TRUE(constant.pass);
  EXPECT_EQ(sgn(constant.parts[0].exact_lhs->coefficient), 0);
  auto vanishing = verify_commutator_series(MultiIndex{0, 3}, MultiIndex{0, 1}, 0, 5);
  EXPECT_TRUE(vanishing.pass);
  EXPECT_EQ(commutator_series_coefficient(MultiIndex{0, 3}, MultiIndex{0, 1}, 0), Rational(0));
}

TEST(CommutatorSeries, PartialSumsOfPolynomialSymbols) {
  // Linearity: the series of a polynomial symbol converges to the commutator.
  const ExactPoly p = parse_poly("z1^2 + 3*z1*z2 - z2", 2), f = parse_poly("z1 + z2^2", 2);
  ExactPoly lhs = coordinate_adjoint_apply(p * f, 0, 0);
  lhs -= p * coordinate_adjoint_apply(f, 0, 0);
  ExactPoly partial(2);
  double last = INFINITY;
  for (int k = 0; k < 40; ++k) {
    partial += commutator_series_term(p, f, 0, k);
    double err = 0.0;
    const ExactPoly diff = partial - lhs;
    for (const auto& [al, c] : diff.terms()) err = std::max(err, std::abs(c.to_complex()));
    EXPECT_LE(err, last + 1e-300);
    last = err;
  }
  EXPECT_LT(last, 1e-4);
}

TEST(NumberOperator, EqualityAtConstant) {
  auto r = verify_number_operator_bounds(parse_poly("1", 2), 0, 0);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.parts[0].exact_lhs->coefficient, q(1, 3));
  EXPECT_EQ(r.parts[0].exact_rhs->coefficient, q(1, 3));
}

TEST(NumberOperator, SecondBoundDifferenceFormula) {
  // T* - T^{(1)*} on z1 is (1/(n+1+d)) T* z1 = 1/4 * 1/3
  auto r = verify_number_operator_bounds(parse_poly("z1", 2), 0, 1);
  EXPECT_TRUE(r.pass);
  const auto& second = r.parts[1];
  EXPECT_EQ(second.exact_lhs->coefficient, q(1, 144) / Rational(3));
  EXPECT_EQ(second.exact_rhs->coefficient, q(5, 3) * q(1, 5));
}

TEST(NumberOperator, MonomialsObeyProductBound) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const auto& al : enumerate_multi_indices(n, n == 3 ? 5 : 7)) {
      for (int k = 0; k <= 3; ++k) {
        for (int l = 0; l <= al.degree(); ++l) {
          auto r = verify_number_operator_bounds(ExactPoly::monomial(al), k, l);
          ASSERT_TRUE(r.pass) << al.to_string() << " k=" << k << " l=" << l;
          // oracle: ||z^a||^2 / ||z^a||_{2k+1}^2 = n! (n+2k+1+d)! / ((n+d)! (n+2k+1)!)
          const int d = al.degree(), N = static_cast<int>(n);
          const Rational conversion = Rational(factorial(N)) * Rational(factorial(N + 2 * k + 1 + d)) /
                                      (Rational(factorial(N + d)) * Rational(factorial(N + 2 * k + 1)));
          const Rational factor = pow(Rational(N + 2 * k + 1 + l), l) / pow(Rational(l + 1 + N), 2 * k + 1);
          const Rational expected = conversion / pow(Rational(d + 1 + N), 2 * k + 1) / factor;
          EXPECT_EQ(exact_ratio(*r.parts[0].exact_lhs, *r.parts[0].exact_rhs), expected);
          EXPECT_LE(expected, Rational(1));
        }
      }
    }
  }
  EXPECT_THROW(verify_number_operator_bounds(parse_poly("1 + z1", 1), 0, 1), std::invalid_argument);
}

TEST(ShellBound, ConstantSymbolIsInclusion) {
  const ExactPoly p = parse_poly("3/2", 2), f = parse_poly("z1 - z2^2", 2);
  for (int k = 0; k <= 3; ++k) {
    auto r = verify_shell_bound(p, f, {ShellFamily::radial, k, 0}, 1.0);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.ratio, 1.0);
  }
}

TEST(ShellBound, ExactExamples) {
  const Rational quarter = q(1, 4);
  {  // p = z1, f = 1, k = l = 1: |R z1|^2 (1-|z|^2)^2 on the shell vs |z1|^2 on the ball
    auto r = verify_shell_bound(parse_poly("z1", 2), parse_poly("1", 2), {ShellFamily::radial, 1, 1}, 10.0);
    const Rational lhs = q(1, 2) * beta_tail(2, 2, quarter);  // pi^2 1!/2! int u^2 (1-u)^2
    const Rational rhs = q(1, 2) * q(1, 3);
    EXPECT_EQ(r.exact_lhs->coefficient, lhs);
    EXPECT_EQ(r.exact_lhs->pi_power, 2);
    EXPECT_EQ(r.exact_rhs->coefficient, rhs);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(*r.constant, std::sqrt(to_double(lhs / rhs)), 1e-15);
  }
  {  // p = z1^2, j = 1, k = 0: |2 z1|^2 (1-|z|^2)^2 on the shell vs |z1^2|^2
    auto r = verify_shell_bound(parse_poly("z1^2", 2), parse_poly("1", 2), {ShellFamily::partial, 0, 0, 1, 0}, 10.0);
    EXPECT_EQ(r.exact_lhs->coefficient, Rational(4) * q(1, 2) * beta_tail(2, 2, quarter));
    EXPECT_EQ(r.exact_rhs->coefficient, q(2, 6) * q(1, 4));
  }
  {  // L_{1,2} z1 = conj(z2): |conj(z2)|^2 (1-|z|^2) on the shell vs |z1|^2 on the ball
    auto r = verify_shell_bound(parse_poly("z1", 2), parse_poly("1", 2), {ShellFamily::tangential, 0, 0, 1, 0}, 10.0);
    EXPECT_EQ(r.exact_lhs->coefficient, q(1, 2) * beta_tail(2, 1, quarter));
    EXPECT_EQ(r.exact_rhs->coefficient, q(1, 6));
  }
  EXPECT_THROW(verify_shell_bound(parse_poly("0", 2), parse_poly("1", 2), {}, 2.0), std::invalid_argument);
  EXPECT_THROW(verify_shell_bound(parse_poly("z1", 2), parse_poly("1", 2), {ShellFamily::radial, 0, 1}, 2.0),
               std::invalid_argument);
}

TEST(ShellBound, CapDecidesPass) {
  const ExactPoly p = parse_poly("z1^3 - 1/5", 1), f = parse_poly("1", 1);
  auto r = verify_shell_bound(p, f, {ShellFamily::partial, 2, 0, 1, 0}, 1e6);
  ASSERT_TRUE(r.constant);
  EXPECT_TRUE(r.pass);
  auto tight = verify_shell_bound(p, f, {ShellFamily::partial, 2, 0, 1, 0}, *r.constant * 0.999);
  EXPECT_FALSE(tight.pass);
  auto loose = verify_shell_bound(p, f, {ShellFamily::partial, 2, 0, 1, 0}, *r.constant * 1.001);
  EXPECT_TRUE(loose.pass);
  EXPECT_GT(reference_shell_cap(2, 3), 1e40);
}

TEST(ShellConstant, ReproducibleAndFinite) {
  ShellConstantOptions o;
  o.kmax = 3;
  auto a = estimate_shell_constant(1, 1, 20, 7, o);
  auto b = estimate_shell_constant(1, 1, 20, 7, o);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_TRUE(a.all_finite);
  EXPECT_GT(a.value, 0.0);
  EXPECT_LT(a.value, reference_shell_cap(1, 1));
  o.threads = 3;
  EXPECT_EQ(estimate_shell_constant(1, 1, 20, 7, o).to_json().dump(), a.to_json().dump());
  // m = 0: the radial family with l = 0 never exceeds 1
  auto zero = estimate_shell_constant(2, 0, 10, 3, o);
  EXPECT_LE(zero.family_max[0], 1.0);
}

TEST(SeriesTerm, Examples) {
  const ExactPoly one = parse_poly("5", 2), f = parse_poly("z1 + z2", 2);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(series_term_norm_sq(one, f, 0, k), Rational(0));
  // p = f = z1: z1 - T*(z1^2) = z1/2, weighted by (N+3)^{-1} at degree 1: (1/4)(1/3)/4
  EXPECT_EQ(series_term_norm_sq(parse_poly("z1", 2), parse_poly("z1", 2), 0, 0), q(1, 48));
  auto r = verify_series_term_bound(parse_poly("z1", 2), parse_poly("z1", 2), 0, 0, 1, 2.0);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.exact_lhs->coefficient, q(1, 48));
}

TEST(SeriesTerm, AggregateDecays) {
  const ExactPoly p = parse_poly("z1*z2 + 1/3", 2), f = parse_poly("z1^2 - z2^3", 2);
  auto r = verify_series_aggregate(p, f, 1, 2, 2.0, 6);
  EXPECT_EQ(r.parts.size(), 7u);
  EXPECT_TRUE(r.details["condition_met"].get<bool>());
  EXPECT_TRUE(r.details["geometric"].get<bool>());
  EXPECT_TRUE(r.pass);
}

TEST(ShellMass, Examples) {
  auto r = verify_shell_mass(parse_poly("1", 1), 0);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.exact_lhs->coefficient, Rational(1));
  EXPECT_EQ(r.exact_rhs->coefficient, q(9, 4));
  // mass moves to the boundary: ball / shell decreases to 1 with the degree
  double last = INFINITY;
  for (int d : {1, 4, 16, 64}) {
    auto m = verify_shell_mass(ExactPoly::monomial(MultiIndex{d, 0}), 2);
    EXPECT_TRUE(m.pass);
    const double ball_over_shell = m.ratio * 27.0;
    EXPECT_GE(ball_over_shell, 1.0);
    EXPECT_LT(ball_over_shell, last);
    last = ball_over_shell;
  }
  EXPECT_NEAR(last, 1.0, 1e-12);
}

TEST(Dilation, Examples) {
  const Rational r34 = q(3, 4);
  auto flat = verify_dilation_bound(parse_poly("z1 + 2*z2", 2), parse_poly("7", 2), r34);
  EXPECT_TRUE(flat.pass);
  EXPECT_EQ(exact_ratio(*flat.exact_lhs, *flat.exact_rhs), q(1, 16));
  for (int d = 0; d <= 6; ++d) {
    auto r = verify_dilation_bound(parse_poly("z1", 2), ExactPoly::monomial(MultiIndex{d, 0}), r34);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(exact_ratio(*r.exact_lhs, *r.exact_rhs), pow(r34, 2 * d) / Rational(16));
  }
  EXPECT_THROW(verify_dilation_bound(parse_poly("z1", 1), parse_poly("1", 1), q(1, 2)), std::invalid_argument);
}

TEST(CircleBound, Examples) {
  for (int l = 1; l <= 4; ++l) {
    ExactPoly p = ExactPoly::monomial(MultiIndex{l});
    auto r = verify_circle_derivative_bound(p, parse_poly("1", 1), l, l, 1.0);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.parts[0].lhs, r.parts[0].rhs, 1e-12);  // equality
  }
  auto zero = verify_circle_derivative_bound(parse_poly("z1 - 2", 1), parse_poly("z1", 1), 1, 1, 0.5);
  EXPECT_TRUE(zero.pass);
  EXPECT_EQ(zero.parts[0].lhs, 0.0);
  auto shifted = verify_circle_derivative_bound(parse_poly("z1 - 2", 1), parse_poly("1", 1), 1, 1, 1.0);
  EXPECT_TRUE(shifted.pass);
  EXPECT_NEAR(shifted.parts[0].rhs, gk_circle_average(parse_poly("z1 - 2", 1)), 1e-12);
  EXPECT_THROW(verify_circle_derivative_bound(parse_poly("z1^3", 1), parse_poly("1", 1), 1, 2, 1.0),
               std::invalid_argument);
}

TEST(CircleBound, QuadratureAgainstGaussKronrod) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const ExactPoly g = generate_polynomial({1, 5}, rng.bits());
    const auto tr = circle_average_abs(to_float(g), 1.0);
    EXPECT_TRUE(tr.converged);
    EXPECT_LT(tr.doubling_change, 1e-10);
    EXPECT_NEAR(tr.value, gk_circle_average(g), 1e-9);
  }
  // zero on the circle: only algebraic convergence, still within the node cap
  const auto kink = circle_average_abs(to_float(parse_poly("z1 - 1", 1)), 1.0);
  EXPECT_TRUE(kink.converged);
  EXPECT_NEAR(kink.value, 4.0 / std::numbers::pi, 1e-9);
}

TEST(CircleBound, ZerosNearTheCircle) {
  // Zeros at |w| = 1 and 1.01: split arcs instead of a slowly converging trapezoid.
  for (const char* text : {"(z1 - 1)*(z1 + 1/2)", "(z1 - 101/100)*(z1 - 1/3)", "(z1 - 1)^2"}) {
    const ExactPoly g = parse_poly(text, 1);
    const auto a = circle_average_abs(to_float(g), 1.0);
    EXPECT_TRUE(a.converged) << text;
    EXPECT_GE(a.arcs, 1u);
    EXPECT_LT(a.doubling_change, 1e-10);
    EXPECT_NEAR(a.value, gk_circle_average(g), 1e-9) << text;
  }
}

TEST(CircleBound, DiskAverageWithInteriorZeros) {
  // Oracle: nested Gauss-Kronrod split at the zeros' moduli (radius) and arguments (angle).
  const std::complex<double> w[] = {{0.6, 0.0}, {0.0, -0.3}, {0.5, 0.5}};
  const ExactPoly g = parse_poly("(z1 - 3/5)*(z1 + 3/10*i)*(z1 - 1/2 - 1/2*i)", 1);
  const FloatPoly fg = to_float(g);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  std::vector<double> angles, radii{0.0, 1.0};
  for (const auto& z : w) {
    angles.push_back(std::arg(z));
    radii.push_back(std::abs(z));
  }
  std::sort(angles.begin(), angles.end());
  angles.push_back(angles.front() + 2 * std::numbers::pi);
  std::sort(radii.begin(), radii.end());
  auto radial = [&](double rho) {
    auto ang = [&](double th) {
      const std::complex<double> z = std::polar(rho, th);
      return std::abs(fg.evaluate(std::span<const std::complex<double>>(&z, 1)));
    };
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < angles.size(); ++k) s += GK::integrate(ang, angles[k], angles[k + 1], 8, 1e-13);
    return rho * s;
  };
  double oracle = 0.0;
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) oracle += GK::integrate(radial, radii[k], radii[k + 1], 6, 1e-12);
  oracle /= std::numbers::pi;
  const auto d = disk_average_abs(fg, 1.0);
  EXPECT_TRUE(d.converged);
  EXPECT_LT(d.doubling_change, 1e-10);
  EXPECT_NEAR(d.value, oracle, 1e-8);
}

TEST(CircleBound, DiskAverage) {
  // nested Gauss-Kronrod in polar coordinates as the oracle
  const ExactPoly g = parse_poly("1 + z1 - 1/2*z1^3", 1);
  const FloatPoly fg = to_float(g);
  for (double r : {0.5, 1.0}) {
    auto radial = [&](double rho) {
      auto ang = [&](double th) {
        const std::complex<double> z = std::polar(rho, th);
        return std::abs(fg.evaluate(std::span<const std::complex<double>>(&z, 1)));
      };
      return rho * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(ang, 0.0, 2 * std::numbers::pi, 10,
                                                                                 1e-14);
    };
    const double oracle =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(radial, 0.0, r, 10, 1e-13) / (std::numbers::pi * r * r);
    const auto d = disk_average_abs(fg, r);
    EXPECT_TRUE(d.converged);
    EXPECT_NEAR(d.value, oracle, 1e-9);
  }
  const auto roots = root_moduli(to_float(parse_poly("(z1 - 1/2)*(z1 + 3)*z1", 1)));
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_NEAR(roots[0], 0.0, 1e-15);
  EXPECT_NEAR(roots[1], 0.5, 1e-12);
  EXPECT_NEAR(roots[2], 3.0, 1e-12);
}

TEST(Identity, SymbolicAndPointwise) {
  auto trivial = verify_radial_tangential_identity(parse_poly("4", 3), 1, 10, 1);
  EXPECT_TRUE(trivial.pass);
  auto linear = verify_radial_tangential_identity(parse_poly("z1", 2), 0, 10, 1);
  EXPECT_TRUE(linear.pass);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const ExactPoly p = generate_polynomial({3, 4}, s);
    for (std::size_t j = 0; j < 3; ++j) {
      auto r = verify_radial_tangential_identity(p, j, 100, s);
      EXPECT_TRUE(r.pass);
      EXPECT_LT(r.parts[1].lhs, 1e-12);
    }
  }
}

TEST(Reports, SerializationAndSummary) {
  std::vector<VerificationReport> reps;
  reps.push_back(verify_shell_mass(parse_poly("z1", 1), 1));
  reps.push_back(verify_shell_mass(parse_poly("1", 2), 0));
  reps.push_back(verify_commutator_series(MultiIndex{1}, MultiIndex{1}, 0, 3));
  std::ostringstream a, b;
  write_jsonl(a, reps);
  write_jsonl(b, reps);
  EXPECT_EQ(a.str(), b.str());
  auto line = nlohmann::json::parse(a.str().substr(0, a.str().find('\n')));
  EXPECT_EQ(line["claim"], "shell_mass_bound");
  EXPECT_EQ(line["kind"], "exact");
  EXPECT_TRUE(line["lhs"].contains("rational"));
  auto rows = summarize(reps);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].count, 2u);
  EXPECT_EQ(rows[0].passed, 2u);
  std::ostringstream csv;
  write_summary_csv(csv, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "claim,count,passed,pass_rate,max_ratio,min_ratio,max_constant");
}

TEST(Reports, FloatTolerance) {
  VerificationReport r;
  set_float(r, 1.0 + 5e-10, 1.0);
  EXPECT_TRUE(r.pass);
  set_float(r, 1.0 + 5e-9, 1.0);
  EXPECT_FALSE(r.pass);
  set_float(r, NAN, 1.0);
  EXPECT_FALSE(r.pass);
}

TEST(Runner, ScheduleIndependent) {
  auto task = [](std::size_t i, std::uint64_t seed) { return seed ^ (i * 31); };
  EXPECT_EQ(run_trials(50, 9, task, 1), run_trials(50, 9, task, 4));
  auto failing = [](std::size_t i, std::uint64_t) -> int {
    if (i == 3) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(run_trials(10, 1, failing, 2), std::runtime_error);
}
