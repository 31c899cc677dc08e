// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance [criterion ...]    (default: all of 1..13)
// Exit status 0 iff every selected criterion passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/cli/config.hpp"
#include "bergman/cli/experiments.hpp"
#include "bergman/covering.hpp"
#include "bergman/inequalities.hpp"
#include "bergman/moments.hpp"
#include "bergman/operators.hpp"
#include "bergman/parallel.hpp"
#include "bergman/poly_io.hpp"
#include "bergman/spectra.hpp"

using namespace bergman;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// |a - b| / max(|a|, |b|), 0 when both vanish.
double relative_change(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

ExactPoly random_poly(std::size_t n, int degree, std::uint64_t seed, int min_degree = 0) {
  return generate_polynomial({n, degree, SupportModel::dense, 0.5, min_degree}, seed);
}

// 1. Commutator series: closed form and geometric tail, exact.
Outcome check_series_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t cases = 0, bad = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto idx = enumerate_multi_indices(n, 6);
    for (const auto& a : idx) {
      for (const auto& b : idx) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto r = verify_commutator_series(a, b, j);
          // Oracle: M*_{z_j} z^{a+b} - z^a M*_{z_j} z^b on monomials.
          const int N = static_cast<int>(n);
          const Rational expect = Rational(a[j] + b[j]) / Rational(N + a.degree() + b.degree()) -
                                  Rational(b[j]) / Rational(N + b.degree());
          const bool ok = r.pass && r.parts.at(0).exact_lhs && r.parts[0].exact_lhs->coefficient == expect;
          bad += ok ? 0 : 1;
          ++cases;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 120.0, fmt("%zu cases, %zu failures, %.1fs (limit 120s)", cases, bad, secs)};
}

// 2. Adjoint of M_{z_j} in the weight-t space: z^a -> a_j / (n+t+|a|) z^{a-e_j}.
Outcome check_adjoint_formulas() {
  std::size_t entries = 0, bad = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int t = 0; t <= 7; ++t) {
      const BasisSpec spec(n, t, 12);
      for (std::size_t j = 0; j < n; ++j) {
        const auto op = exact_coordinate_adjoint(j, spec);
        std::map<std::pair<std::size_t, std::size_t>, QComplex> got;
        for (const auto& e : op.entries) got[{e.row, e.col}] = e.value;
        std::size_t expected_entries = 0;
        for (std::size_t col = 0; col < spec.dim(); ++col) {
          const MultiIndex& a = spec.index(col);
          if (a[j] == 0) continue;
          ++expected_entries;
          const auto row = op.codomain.position(a.lowered(j));
          const auto it = row ? got.find({*row, col}) : got.end();
          const QComplex expect(Rational(a[j]) / Rational(static_cast<int>(n) + t + a.degree()));
          if (it == got.end() || it->second != expect) ++bad;
        }
        if (expected_entries != got.size()) ++bad;
        entries += expected_entries;
      }
    }
  }
  return {bad == 0, fmt("%zu entries, %zu mismatches", entries, bad)};
}

// 3. Number-operator bounds on monomials; equality for f = 1, n = 2, k = l = 0.
Outcome check_number_operator() {
  std::size_t cases = 0, bad = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const auto& a : enumerate_multi_indices(n, 10)) {
      const ExactPoly f = ExactPoly::monomial(a);
      for (int k = 0; k <= 5; ++k) {
        for (int l = 0; l <= a.degree(); ++l) {
          bad += verify_number_operator_bounds(f, k, l).pass ? 0 : 1;
          ++cases;
        }
      }
    }
  }
  const auto eq = verify_number_operator_bounds(parse_poly("1", 2), 0, 0);
  const PiValue third{Rational(1) / Rational(3), 0};
  const bool equality = eq.pass && *eq.parts.at(0).exact_lhs == third && *eq.parts[0].exact_rhs == third;
  return {bad == 0 && equality, fmt("%zu cases, %zu failures; n=2 f=1 lhs=rhs=1/3: %s", cases, bad,
                                    equality ? "yes" : "no")};
}

// 4. Empirical shell constants, two disjoint seed batches.
Outcome check_shell_constants() {
  Outcome o;
  std::string rows;
  ShellConstantOptions opts;
  opts.kmax = 6;
  for (std::size_t n = 1; n <= 2; ++n) {
    for (int m = 1; m <= 3; ++m) {
      const std::uint64_t base = 0xacce97 + 100 * n + m;
      const auto a = estimate_shell_constant(n, m, 500, derive_seed(base, 0), opts);
      const auto b = estimate_shell_constant(n, m, 500, derive_seed(base, 1), opts);
      const double change = relative_change(a.value, b.value);
      const bool ok = a.all_finite && b.all_finite && std::isfinite(a.value) && std::isfinite(b.value) &&
                      change <= 0.10;
      o.pass = o.pass && ok;
      rows += fmt(" (n=%zu,m=%d: %.4g/%.4g, %.1f%%)", n, m, a.value, b.value, 100 * change);
    }
  }
  o.detail = "cap batches A/B" + rows + " limit 10%";
  return o;
}

// 5. Boundary mass and dilation bounds, exact.
Outcome check_mass_and_dilation() {
  const std::vector<Rational> radii{Rational(3, 5), Rational(3, 4), Rational(9, 10)};
  std::size_t mass = 0, mass_bad = 0, dil = 0, dil_bad = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto idx = enumerate_multi_indices(n, 8);
    for (const auto& a : idx) {
      for (int t = 0; t <= 6; ++t) {
        mass_bad += verify_shell_mass(ExactPoly::monomial(a), t).pass ? 0 : 1;
        ++mass;
      }
    }
    if (n == 3) continue;  // monomial pairs for n <= 2; random trials cover n = 3
    for (const auto& a : idx) {
      for (const auto& b : idx) {
        for (const auto& r : radii) {
          dil_bad += verify_dilation_bound(ExactPoly::monomial(a), ExactPoly::monomial(b), r).pass ? 0 : 1;
          ++dil;
        }
      }
    }
  }
  const std::uint64_t master = 0x5e11;
  const auto mass_random = run_trials(200, master, [](std::size_t i, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = 1 + i % 3;
    const ExactPoly f = random_poly(n, static_cast<int>(rng.index(9)), seed);
    bool ok = true;
    for (int t = 0; t <= 6; ++t) ok = ok && verify_shell_mass(f, t).pass;
    return static_cast<int>(ok);
  });
  const auto dil_random =
      run_trials(200, derive_seed(master, 1000), [&radii](std::size_t i, std::uint64_t seed) {
        Rng rng(seed);
        const std::size_t n = 1 + i % 3;
        const ExactPoly p = random_poly(n, static_cast<int>(rng.index(5)), derive_seed(seed, 1));
        const ExactPoly f = random_poly(n, static_cast<int>(rng.index(5)), derive_seed(seed, 2));
        bool ok = true;
        for (const auto& r : radii) ok = ok && verify_dilation_bound(p, f, r).pass;
        return static_cast<int>(ok);
      });
  const auto rm = static_cast<std::size_t>(std::count(mass_random.begin(), mass_random.end(), 0));
  const auto rd = static_cast<std::size_t>(std::count(dil_random.begin(), dil_random.end(), 0));
  return {mass_bad + dil_bad + rm + rd == 0,
          fmt("monomial mass %zu/%zu, dilation %zu/%zu failures; random mass %zu/200, dilation %zu/200", mass_bad,
              mass, dil_bad, dil, rm, rd)};
}

// 6. One-variable derivative bounds by quadrature.
Outcome check_circle_bounds() {
  struct Trial {
    std::size_t checks = 0, failures = 0;
    double worst_change = 0.0;
  };
  const auto trials = run_trials(200, 0xc1c1e, [](std::size_t, std::uint64_t seed) {
    Rng rng(seed);
    const int m = 1 + static_cast<int>(rng.index(4));
    const ExactPoly p = random_poly(1, m, derive_seed(seed, 1));
    const ExactPoly f = random_poly(1, static_cast<int>(rng.index(9)), derive_seed(seed, 2));
    Trial t;
    for (int l = 1; l <= m; ++l) {
      for (double r : {0.5, 1.0}) {
        const auto rep = verify_circle_derivative_bound(p, f, l, m, r);
        ++t.checks;
        bool ok = rep.pass;
        for (const auto& part : rep.parts) {
          const double change = part.details.at("doubling_change").get<double>() / std::max(1.0, part.rhs);
          t.worst_change = std::max(t.worst_change, change);
          ok = ok && change < 1e-10;
        }
        t.failures += ok ? 0 : 1;
      }
    }
    return t;
  });
  Trial total;
  for (const auto& t : trials) {
    total.checks += t.checks;
    total.failures += t.failures;
    total.worst_change = std::max(total.worst_change, t.worst_change);
  }
  return {total.failures == 0, fmt("%zu checks, %zu failures (tol 1e-8), max doubling change %.2e (limit 1e-10)",
                                   total.checks, total.failures, total.worst_change)};
}

// 7. Coefficients of R^l in the basis z^j d^j: Stirling numbers of the second kind.
Outcome check_radial_coefficients() {
  std::size_t bad = 0, entries = 0;
  for (int l = 1; l <= 12; ++l) {
    const auto a = radial_power_coeffs(l);
    if (a.size() != static_cast<std::size_t>(l)) ++bad;
    for (int j = 1; j <= std::min<int>(l, static_cast<int>(a.size())); ++j) {
      // S(l, j) = (1/j!) sum_i (-1)^i C(j, i) (j - i)^l
      Integer s = 0;
      for (int i = 0; i <= j; ++i) {
        Integer term = binomial(j, i);
        Integer power = 1;
        for (int e = 0; e < l; ++e) power *= (j - i);
        term *= power;
        s += (i % 2 == 0) ? term : Integer(-term);
      }
      s /= factorial(j);
      Integer bound = 1;
      for (int e = 0; e < l; ++e) bound *= (j + 1);
      const Integer& v = a[static_cast<std::size_t>(j - 1)];
      if (v != s || abs(v) >= bound) ++bad;
      ++entries;
    }
  }
  return {bad == 0, fmt("%zu coefficients for l <= 12, %zu mismatches or bound violations", entries, bad)};
}

// 8. Box distortion for random pairs, with containment probes on a subsample.
Outcome check_distortion_pairs() {
  Outcome o;
  std::string rows;
  for (std::size_t n = 1; n <= 3; ++n) {
    CoverConfig cfg;
    cfg.n = n;
    const auto viol = run_trials(10000, 0xd157 + n, [&cfg, n](std::size_t i, std::uint64_t seed) {
      Rng rng(seed);
      const Point z = sample_shell_point(rng, n, cfg.r);
      const Point zp = sample_in_box({z, cfg.delta(z)}, rng, i % 2 == 1);
      const std::size_t probes = i < 100 ? 1000 : 0;
      return check_box_distortion(z, zp, cfg, probes, derive_seed(seed, 7)).pass ? 0 : 1;
    });
    std::size_t pair_bad = 0, probe_bad = 0;
    for (std::size_t i = 0; i < viol.size(); ++i) (i < 100 ? probe_bad : pair_bad) += viol[i];
    o.pass = o.pass && pair_bad + probe_bad == 0;
    rows += fmt(" n=%zu: %zu (%zu among the 100 probed pairs)", n, pair_bad + probe_bad, probe_bad);
  }
  o.detail = "10^4 pairs per n, violations" + rows;
  return o;
}

// 9. Greedy cover of the shell and overlap of the dilates.
Outcome cover_one(std::size_t samples, double c, std::size_t probes, std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  CoverConfig cfg;
  cfg.n = 2;
  cfg.samples = samples;
  cfg.c = c;
  cfg.seed = 0xc07e5 + samples;
  const auto pts = sample_shell(cfg);
  const auto cover = greedy_cover(pts, cfg);
  Rng rng(derive_seed(cfg.seed, 1));
  std::vector<Point> probe_points;
  probe_points.reserve(probes);
  for (std::size_t i = 0; i < probes; ++i) probe_points.push_back(sample_shell_point(rng, 2, cfg.r));
  const auto overlap = overlap_histogram(cover_boxes(pts, cover, cfg, cfg.dilate), probe_points);
  const double secs = seconds_since(t0);
  const bool ok = cover.disjointness_violations == 0 && cover.uncovered == 0 && cover.monotone &&
                  static_cast<double>(overlap.max_multiplicity) <= overlap_bound(2) && secs < 300.0;
  detail += fmt(" [N=%zu c=%.3g: %zu centers, %zu overlapping pairs, %zu uncovered, %zu undecided, max overlap "
                "%zu <= %.3g, %.1fs]",
                samples, c, cover.centers.size(), cover.disjointness_violations, cover.uncovered, cover.undecided,
                overlap.max_multiplicity, overlap_bound(2), secs);
  return {ok, {}};
}

Outcome check_greedy_cover_run() {
  std::string detail;
  const bool a = cover_one(100000, 1e-3, 100000, detail).pass;
  const bool b = cover_one(1000, covering_margin(), 10000, detail).pass;
  return {a && b, detail.substr(1)};
}

// 10. Commutator spectra.
Outcome check_commutator_spectra() {
  Outcome o;
  auto one_variable = [](int D) {
    return interior_singular_values(compressed_commutator(build_submodule({parse_poly("1", 1), D, 0, 0}), 0, 0));
  };
  // n = 1: S S* - S* S is diagonal with entries -1/((k+1)(k+2)).
  const auto s20 = one_variable(20);
  double worst = s20.values.size() == 20 ? 0.0 : 1.0;
  for (std::size_t k = 0; k < std::min<std::size_t>(20, s20.values.size()); ++k) {
    worst = std::max(worst, std::abs(s20.values[k] - 1.0 / ((k + 1.0) * (k + 2.0))));
  }
  // Telescoping: sum_{k<D} 1/((k+1)(k+2)) = 1 - 1/(D+1) -> 1.
  const double s1 = schatten_norm(one_variable(100), 1.0);
  const bool one_var_ok = worst < 1e-12 && std::abs(1.0 - s1) < 1e-2;
  o.detail = fmt("n=1 D=20 max error %.2e (limit 1e-12), D=100 schatten-1 %.6f (|1-x| < 1e-2);", worst, s1);
  o.pass = one_var_ok;

  for (const char* text : {"z1*z2", "z1^2", "z1 + z2"}) {
    const ExactPoly p = parse_poly(text, 2);
    std::vector<SingularSpectrum> spectra;
    for (int B : {10, 14, 18}) {
      spectra.push_back(interior_singular_values(compressed_commutator(build_submodule({p, B, 0, 0}), 0, 1)));
    }
    double top = 0.0;
    const auto& a = spectra[1].values;
    const auto& b = spectra[2].values;
    bool enough = a.size() >= 10 && b.size() >= 10;
    for (std::size_t k = 0; enough && k < 10; ++k) top = std::max(top, relative_change(a[k], b[k]));
    std::vector<double> norms;
    for (const auto& s : spectra) norms.push_back(schatten_norm(s, 3.0));
    const double growth = norms[2] / norms[1] - 1.0;
    const bool ok = enough && top < 1e-2 && growth <= 0.05;
    o.pass = o.pass && ok;
    // Not part of the criterion: the next step, to show the growth keeps shrinking.
    const double next = schatten_norm(
        interior_singular_values(compressed_commutator(build_submodule({p, 22, 0, 0}), 0, 1)), 3.0);
    o.detail += fmt(" p=%s: top-10 change %.2e (limit 1e-2), schatten-3 %.4f/%.4f/%.4f (last growth %.2f%%, limit 5%%;"
                    " B=22 would add %.2f%%);",
                    text, top, norms[0], norms[1], norms[2], 100 * growth, 100 * (next / norms[2] - 1.0));
  }
  return o;
}

// 11. Reproducing kernels at zeros of p are orthogonal to [p].
Outcome check_kernel_orthogonality_probe() {
  struct Case {
    const char* text;
    std::function<Point(Rng&)> zero;
  };
  const std::vector<Case> cases{
      {"z1*z2",
       [](Rng& rng) {
         const auto u = rng.unit_disk() * 0.95;
         return rng.uniform() < 0.5 ? Point{0.0, u} : Point{u, 0.0};
       }},
      {"z1^2", [](Rng& rng) { return Point{0.0, rng.unit_disk() * 0.95}; }},
      {"z1 + z2",
       [](Rng& rng) {
         const auto u = rng.unit_disk() * (0.95 / std::sqrt(2.0));
         return Point{u, -u};
       }},
  };
  double worst_zero = 0.0, worst_far = 1.0;
  for (const auto& c : cases) {
    const ExactPoly p = parse_poly(c.text, 2);
    const FloatPoly fp = to_float(p);
    const auto sub = build_submodule({p, 10, 0, 0});
    Rng rng(0x6e7 + p.term_count());
    for (int i = 0; i < 50; ++i) {
      const Point w = c.zero(rng);
      worst_zero = std::max(worst_zero, kernel_orthogonality(w, sub));
    }
    for (int i = 0; i < 50;) {
      const Point w = rng.ball_point(2);
      if (norm(w) > 0.95 || std::abs(fp.evaluate(w)) <= 0.1) continue;
      worst_far = std::min(worst_far, kernel_orthogonality(w, sub));
      ++i;
    }
  }
  return {worst_zero < 1e-10 && worst_far > 1e-6,
          fmt("max at zeros %.2e (limit 1e-10), min where |p| > 0.1: %.2e (limit 1e-6)", worst_zero, worst_far)};
}

// 12. Slice decomposition against moments (exact) and Monte Carlo.
Outcome check_slice_formula() {
  std::size_t cases = 0, bad = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto idx = enumerate_multi_indices(n, 8);
    for (const auto& a : idx) {
      for (const auto& b : idx) {
        if (a.degree() + b.degree() > 8) continue;
        ExactMixedPoly g(n);
        g.add_term(a, b, QComplex(1));
        for (int t = 0; t <= 1; ++t) {
          const PiComplex s = slice_integral(g, t);
          const PiValue m = moment(a, b, t, Region::ball());
          const bool ok = s.coefficient.im == 0 && s.coefficient.re == m.coefficient &&
                          (sgn(m.coefficient) == 0 || s.pi_power == m.pi_power);
          bad += ok ? 0 : 1;
          ++cases;
        }
      }
    }
  }
  const auto z = run_trials(30, 0x511ce, [](std::size_t i, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = 1 + i % 3;
    const ExactPoly p = random_poly(n, 1 + static_cast<int>(rng.index(3)), derive_seed(seed, 1));
    const ExactPoly q = random_poly(n, static_cast<int>(rng.index(3)), derive_seed(seed, 2));
    const ExactMixedPoly g = ExactMixedPoly(p) * ExactMixedPoly(q).conjugate();
    const int t = static_cast<int>(i % 2);
    const auto est = monte_carlo_integral(to_float(g), t, Region::ball(), 20000, derive_seed(seed, 3));
    return est.z_score(to_complex(slice_integral(g, t)));
  });
  const double worst_z = *std::max_element(z.begin(), z.end());
  return {bad == 0 && worst_z < 4.0,
          fmt("%zu monomial integrands, %zu mismatches; Monte Carlo max |z| %.2f over 30 cases (limit 4)", cases,
              bad, worst_z)};
}

// 13. Byte-identical reports across reruns and thread counts.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome check_determinism() {
  const fs::path root = fs::temp_directory_path() / "bergman_acceptance_determinism";
  fs::remove_all(root);
  std::size_t compared = 0, differ = 0;
  auto run_in = [&root](cli::ExperimentConfig c, const std::string& name, unsigned threads) {
    const fs::path dir = root / name;
    fs::create_directories(dir);
    c.output.dir = dir.string();
    c.threads = threads;
    cli::run(c);
    return dir;
  };
  cli::ExperimentConfig verify;
  verify.kind = cli::ExperimentKind::verify;
  verify.n = 2;
  verify.seed = 2024;
  verify.verify.max_degree = 3;
  verify.verify.k_max = 2;
  verify.verify.t_max = 2;
  verify.verify.trials = 8;
  verify.verify.pairs = 50;
  verify.verify.identity_points = 5;
  cli::ExperimentConfig constants;
  constants.kind = cli::ExperimentKind::constants;
  constants.n = 2;
  constants.seed = 2024;
  constants.constants.trials = 20;
  constants.constants.k_max = 3;
  for (const auto& [name, c] : {std::pair{"verify", verify}, std::pair{"constants", constants}}) {
    const auto a = run_in(c, std::string(name) + "_1", 1);
    const auto b = run_in(c, std::string(name) + "_1b", 1);
    const auto d = run_in(c, std::string(name) + "_3", 3);
    // The written config records output.dir and threads, so it is not compared.
    for (const char* file : {"bergman.jsonl", "bergman_summary.csv"}) {
      const std::string ref = slurp(a / file);
      for (const auto& other : {b, d}) {
        ++compared;
        if (ref.empty() || slurp(other / file) != ref) ++differ;
      }
    }
  }
  fs::remove_all(root);
  return {differ == 0, fmt("%zu report comparisons (rerun and 1 vs 3 threads), %zu differ", compared, differ)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"commutator series identity", check_series_identity},
      {"adjoint formulas", check_adjoint_formulas},
      {"number operator bounds", check_number_operator},
      {"shell constants stable", check_shell_constants},
      {"boundary mass and dilation", check_mass_and_dilation},
      {"one-variable derivative bounds", check_circle_bounds},
      {"radial power coefficients", check_radial_coefficients},
      {"box distortion", check_distortion_pairs},
      {"greedy cover", check_greedy_cover_run},
      {"commutator spectra", check_commutator_spectra},
      {"kernel orthogonality", check_kernel_orthogonality_probe},
      {"slice formula", check_slice_formula},
      {"determinism", check_determinism},
  };
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoul(argv[i]));
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!selected.empty() && !selected.count(k + 1)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("%s %2zu %-32s %6.1fs  %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
