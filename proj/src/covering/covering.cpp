#include "bergman/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "bergman/parallel.hpp"

namespace bergman {

std::complex<double> inner(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw DimensionMismatch("points of different dimension");
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

double norm(const Point& a) {
  double s = 0.0;
  for (const auto& c : a) s += std::norm(c);
  return std::sqrt(s);
}

double CarlesonBox::extent() const { return std::sqrt(delta * delta + delta); }

namespace {

Point difference(const Point& a, const Point& b) {
  Point d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

/// A box in coordinates where some reference point is the origin.
struct LocalBox {
  Point center;
  Point axis;  // unit vector along the complex line
  double delta;
  double root;  // sqrt(delta)
};

Point unit(const Point& a) {
  const double r = norm(a);
  if (!(r > 0)) throw std::invalid_argument("box center must be nonzero");
  Point u = a;
  for (auto& c : u) c /= r;
  return u;
}

/// Splits y into its component along u and the remainder.
std::complex<double> split(const Point& y, const Point& u, Point& perp) {
  const std::complex<double> par = inner(y, u);
  perp.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) perp[i] = y[i] - par * u[i];
  return par;
}

Point project(const LocalBox& b, const Point& x) {
  Point perp;
  std::complex<double> par = split(difference(x, b.center), b.axis, perp);
  if (std::abs(par) > b.delta) par *= b.delta / std::abs(par);
  const double pn = norm(perp);
  if (pn > b.root) {
    for (auto& c : perp) c *= b.root / pn;
  }
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = b.center[i] + par * b.axis[i] + perp[i];
  return out;
}

/// sup over the closed box of Re <x, w>.
double support(const LocalBox& b, const Point& w) {
  Point perp;
  const std::complex<double> par = split(w, b.axis, perp);
  return inner(b.center, w).real() + b.delta * std::abs(par) + b.root * norm(perp);
}

std::uint64_t splitmix_hash(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform grid over R^{2n}; cells keyed by hashed integer coordinates.
class Grid {
 public:
  Grid(double cell, std::size_t n) : cell_(cell), n_(n) {}

  std::vector<long long> cell_of(const Point& z) const {
    std::vector<long long> k(2 * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      k[2 * i] = static_cast<long long>(std::floor(z[i].real() / cell_));
      k[2 * i + 1] = static_cast<long long>(std::floor(z[i].imag() / cell_));
    }
    return k;
  }
  void insert(const Point& z, std::size_t id) { cells_[key(cell_of(z))].push_back(id); }

  /// Ids in the 3^{2n} cells around z, ascending.
  std::vector<std::size_t> near(const Point& z) const {
    const auto base = cell_of(z);
    std::vector<std::size_t> out;
    std::vector<long long> k(base.size());
    const std::size_t dims = base.size();
    std::size_t combos = 1;
    for (std::size_t d = 0; d < dims; ++d) combos *= 3;
    for (std::size_t m = 0; m < combos; ++m) {
      std::size_t r = m;
      for (std::size_t d = 0; d < dims; ++d) {
        k[d] = base[d] + static_cast<long long>(r % 3) - 1;
        r /= 3;
      }
      auto it = cells_.find(key(k));
      if (it != cells_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static std::uint64_t key(const std::vector<long long>& k) {
    std::uint64_t h = 0;
    for (long long v : k) h = splitmix_hash(h ^ static_cast<std::uint64_t>(v));
    return h;
  }
  double cell_;
  std::size_t n_;
  // Hash collisions only add candidates; every candidate is tested exactly.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

}  // namespace

bool box_membership(const Point& z, const CarlesonBox& box) {
  const Point u = unit(box.center);
  Point perp;
  const std::complex<double> par = split(difference(z, box.center), u, perp);
  double perp_sq = 0.0;
  for (const auto& c : perp) perp_sq += std::norm(c);
  return std::abs(par) < box.delta && perp_sq < box.delta;
}

bool box_in_shell(const CarlesonBox& box, double rho) {
  const double a = norm(box.center);
  return a - box.delta >= rho && (a + box.delta) * (a + box.delta) + box.delta <= 1.0;
}

namespace {

bool box_before(const CarlesonBox& a, const CarlesonBox& b) {
  if (a.delta != b.delta) return a.delta < b.delta;
  for (std::size_t i = 0; i < a.center.size(); ++i) {
    if (a.center[i].real() != b.center[i].real()) return a.center[i].real() < b.center[i].real();
    if (a.center[i].imag() != b.center[i].imag()) return a.center[i].imag() < b.center[i].imag();
  }
  return false;
}

bool inside_open(const LocalBox& b, const Point& x) {
  Point perp;
  const std::complex<double> par = split(difference(x, b.center), b.axis, perp);
  double perp_sq = 0.0;
  for (const auto& c : perp) perp_sq += std::norm(c);
  return std::abs(par) < b.delta && perp_sq < b.delta;
}

}  // namespace

IntersectionResult boxes_intersect(const CarlesonBox& first, const CarlesonBox& second, double tol,
                                   std::size_t max_iterations) {
  if (first.center.size() != second.center.size()) throw DimensionMismatch("boxes of different dimension");
  if (!(first.delta > 0) || !(second.delta > 0)) throw std::invalid_argument("box size must be positive");
  // A fixed order makes the answer symmetric in the arguments.
  const bool swap = box_before(second, first);
  const CarlesonBox& a = swap ? second : first;
  const CarlesonBox& b = swap ? first : second;
  IntersectionResult res;
  // Work relative to a's center so nearby boxes keep full relative precision.
  const LocalBox A{Point(a.center.size(), 0.0), unit(a.center), a.delta, std::sqrt(a.delta)};
  const LocalBox B{difference(b.center, a.center), unit(b.center), b.delta, std::sqrt(b.delta)};
  const double dist = norm(B.center);
  if (dist >= a.extent() + b.extent()) {
    res.intersect = false;
    res.gap = dist - a.extent() - b.extent();
    return res;
  }
  const double scale = tol * std::min(a.delta, b.delta);
  Point x(B.center.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * B.center[i];
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    const Point y = project(B, x);
    const Point xa = project(A, y);
    const Point w = difference(y, xa);
    res.iterations = it;
    res.gap = norm(w);
    if (res.gap <= scale) {
      res.intersect = true;
      return res;
    }
    // Thin overlaps converge slowly; a midpoint inside both open boxes settles it.
    Point mid(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) mid[i] = 0.5 * (y[i] + xa[i]);
    if (inside_open(A, mid) && inside_open(B, mid)) {
      res.intersect = true;
      return res;
    }
    // Disjoint if sup_A Re<., w> < inf_B Re<., w> = -sup_B Re<., -w>.
    Point minus_w = w;
    for (auto& c : minus_w) c = -c;
    const double margin = support(A, w) + support(B, minus_w);
    if (margin < -1e-12 * res.gap * std::max(a.extent(), b.extent())) {
      res.intersect = false;
      return res;
    }
    x = xa;
  }
  res.intersect = true;
  res.decided = false;
  return res;
}

void CoverConfig::validate() const {
  if (n < 1) throw std::invalid_argument("dimension must be at least one");
  if (!(r > 0.25 && r < 1.0)) throw std::invalid_argument("cover radius must satisfy 1/4 < r < 1");
  const double limit = std::min((r - 0.25) / 4.0, 0.1);
  if (!(c > 0 && c < limit)) throw std::invalid_argument("cover scale must satisfy 0 < c < min((r - 1/4)/4, 1/10)");
  if (!(shrink > 0) || !(dilate > 0)) throw std::invalid_argument("shrink and dilate factors must be positive");
  if (samples < 1) throw std::invalid_argument("cover needs at least one sample");
  if (!(tolerance > 0) || max_iterations < 1) throw std::invalid_argument("invalid intersection tolerance");
}

double CoverConfig::delta(const Point& z) const { return c * (1.0 - norm(z)); }

double covering_margin() { return 1.0 / (10.0 * std::pow(kContainmentConstant, 3.0)); }

double overlap_bound(std::size_t n) { return std::pow(kContainmentConstant, 6.0 * static_cast<double>(n) + 6.0) + 1.0; }

Point sample_shell_point(Rng& rng, std::size_t n, double r) {
  Point z = rng.sphere_point(n);
  const double e = 2.0 * static_cast<double>(n);
  const double lo = std::pow(r, e);
  double radius = std::pow(lo + rng.uniform() * (1.0 - lo), 1.0 / e);
  if (!(radius > r)) radius = std::nextafter(r, 1.0);
  for (auto& c : z) c *= radius;
  return z;
}

std::vector<Point> sample_shell(const CoverConfig& config) {
  Rng rng(config.seed);
  std::vector<Point> out;
  out.reserve(config.samples);
  for (std::size_t s = 0; s < config.samples; ++s) out.push_back(sample_shell_point(rng, config.n, config.r));
  return out;
}

Point sample_in_box(const CarlesonBox& box, Rng& rng, bool boundary_biased) {
  const std::size_t n = box.center.size();
  const Point u = unit(box.center);
  constexpr double kInside = 1.0 - 0x1.0p-40;
  auto radial = [&](double power) {
    if (boundary_biased) return kInside * (1.0 - 1e-9 * rng.uniform());
    return kInside * std::pow(rng.uniform(), power);
  };
  // Rounding of center + offset is absolute (~eps |a|), so the relative margin
  // alone is not enough for the tiny boxes near the sphere.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + norm(box.center));
  const double par_radius = std::max(0.0, std::min(box.delta * radial(0.5), box.delta - slack));
  const std::complex<double> par = std::polar(par_radius, 2.0 * std::numbers::pi * rng.uniform());
  Point z = box.center;
  for (std::size_t i = 0; i < n; ++i) z[i] += par * u[i];
  if (n == 1) return z;
  Point g = rng.sphere_point(n);
  Point perp;
  split(g, u, perp);
  const double pn = norm(perp);
  if (pn == 0.0) return z;
  const double radius = std::max(0.0, std::min(std::sqrt(box.delta) * radial(1.0 / (2.0 * static_cast<double>(n - 1))),
                                                std::sqrt(box.delta) - slack));
  for (std::size_t i = 0; i < n; ++i) z[i] += perp[i] * (radius / pn);
  return z;
}

VerificationReport check_box_distortion(const Point& z, const Point& zp, const CoverConfig& config,
                                        std::size_t probes, std::uint64_t seed) {
  const double c = config.c;
  const double nz = norm(z), nzp = norm(zp);
  const CarlesonBox Bz{z, config.delta(z)};
  VerificationReport r;
  r.claim = "box_distortion";
  r.parameters = {{"n", z.size()}, {"r", config.r}, {"c", c}, {"norm_z", nz}, {"norm_zp", nzp}, {"probes", probes}};
  r.seed = seed;
  const bool pre = nz > config.r && nz < 1.0 && box_membership(zp, Bz);
  r.details = {{"precondition", pre}};
  if (!pre) {
    r.pass = false;
    return r;
  }
  auto strict_part = [&](const char* name, double lo, double value, double hi) {
    VerificationReport p;
    p.claim = r.claim;
    p.details = {{"part", name}, {"lower", lo}, {"upper", hi}};
    p.kind = ScalarKind::floating;
    p.lhs = value;
    p.rhs = hi;
    p.ratio = safe_ratio(value, hi);
    p.pass = lo < value && value < hi;
    r.parts.push_back(std::move(p));
  };
  const double inf = std::numeric_limits<double>::infinity();
  strict_part("norm_sq_ratio", 1 - 3 * c, (1 - nzp * nzp) / (1 - nz * nz), 1 + 2 * c);
  strict_part("distance_ratio", 1.0 / 3.0, (1 - nzp) / (1 - nz), 3.0);
  strict_part("modulus_ratio", 1 - 4 * c, nzp / nz, inf);
  strict_part("point_in_shell", config.r - 4 * c, nzp, 1.0);
  {
    VerificationReport p;
    p.claim = r.claim;
    p.kind = ScalarKind::floating;
    p.lhs = config.r - 4 * c;
    p.rhs = nz - Bz.delta;
    p.ratio = safe_ratio(p.lhs, p.rhs);
    p.pass = box_in_shell(Bz, config.r - 4 * c) && config.r - 4 * c >= 0.25;
    p.details = {{"part", "box_in_shell"}};
    r.parts.push_back(std::move(p));
  }
  if (probes > 0) {
    Rng rng(seed);
    const CarlesonBox Bzp{zp, config.delta(zp)};
    const CarlesonBox bigz{z, kContainmentConstant * Bz.delta};
    const CarlesonBox bigzp{zp, kContainmentConstant * Bzp.delta};
    auto containment = [&](const char* name, const CarlesonBox& small, const CarlesonBox& big) {
      std::size_t bad = 0;
      for (std::size_t s = 0; s < probes; ++s) {
        if (!box_membership(sample_in_box(small, rng, s % 2 == 0), big)) ++bad;
      }
      VerificationReport p;
      p.claim = r.claim;
      p.kind = ScalarKind::floating;
      p.lhs = static_cast<double>(bad);
      p.rhs = 0.0;
      p.ratio = static_cast<double>(bad) / static_cast<double>(probes);
      p.pass = bad == 0;
      p.details = {{"part", name}, {"violations", bad}};
      r.parts.push_back(std::move(p));
    };
    containment("containment_forward", Bzp, bigz);
    containment("containment_backward", Bz, bigzp);
  }
  bool all = true;
  for (const auto& p : r.parts) all = all && p.pass;
  r.kind = ScalarKind::floating;
  r.pass = all;
  r.lhs = r.parts.empty() ? 0.0 : r.parts.front().lhs;
  r.rhs = r.parts.empty() ? 0.0 : r.parts.front().rhs;
  r.ratio = safe_ratio(r.lhs, r.rhs);
  return r;
}

CoverResult greedy_cover(const std::vector<Point>& samples, const CoverConfig& config) {
  config.validate();
  if (samples.empty()) throw std::invalid_argument("cover needs at least one sample");
  const std::size_t N = samples.size();
  std::vector<double> shrunk(N);
  double max_extent = 0.0;
  for (std::size_t s = 0; s < N; ++s) {
    if (samples[s].size() != config.n) throw DimensionMismatch("sample has wrong dimension");
    const double nz = norm(samples[s]);
    if (!(nz > config.r && nz < 1.0)) throw std::invalid_argument("sample outside the shell");
    shrunk[s] = config.shrink * config.delta(samples[s]);
    max_extent = std::max(max_extent, CarlesonBox{samples[s], shrunk[s]}.extent());
  }
  // Largest shrunk radius first; ties by index keep the order deterministic.
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return shrunk[a] > shrunk[b]; });

  Grid grid(2.0 * max_extent, config.n);
  for (std::size_t s = 0; s < N; ++s) grid.insert(samples[s], s);

  CoverResult res;
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  res.assigned.assign(N, kFree);
  for (std::size_t s : order) {
    if (res.assigned[s] != kFree) continue;
    const std::size_t pos = res.centers.size();
    if (!res.shrunk_delta.empty() && shrunk[s] > res.shrunk_delta.back()) res.monotone = false;
    res.centers.push_back(s);
    res.shrunk_delta.push_back(shrunk[s]);
    res.assigned[s] = pos;
    const CarlesonBox chosen{samples[s], shrunk[s]};
    for (std::size_t t : grid.near(samples[s])) {
      if (res.assigned[t] != kFree) continue;
      const auto hit = boxes_intersect(chosen, {samples[t], shrunk[t]}, config.tolerance, config.max_iterations);
      if (!hit.decided) ++res.undecided;
      if (hit.intersect) res.assigned[t] = pos;
    }
  }

  // Coverage by the undilated box of the discarding center.
  for (std::size_t s = 0; s < N; ++s) {
    const std::size_t center = res.centers[res.assigned[s]];
    if (center == s) continue;
    if (box_membership(samples[s], {samples[center], config.delta(samples[center])})) continue;
    bool found = false;
    for (std::size_t k = 0; k < res.centers.size() && !found; ++k) {
      const auto& zc = samples[res.centers[k]];
      found = box_membership(samples[s], {zc, config.delta(zc)});
    }
    if (!found) {
      ++res.uncovered;
      res.uncovered_samples.push_back(s);
    }
  }

  // Independent disjointness check: sweep over the first real coordinate.
  std::vector<std::size_t> sweep(res.centers.size());
  std::iota(sweep.begin(), sweep.end(), std::size_t{0});
  auto x0 = [&](std::size_t k) { return samples[res.centers[k]][0].real(); };
  std::stable_sort(sweep.begin(), sweep.end(), [&](std::size_t a, std::size_t b) { return x0(a) < x0(b); });
  for (std::size_t a = 0; a < sweep.size(); ++a) {
    const CarlesonBox A{samples[res.centers[sweep[a]]], res.shrunk_delta[sweep[a]]};
    for (std::size_t b = a + 1; b < sweep.size(); ++b) {
      if (x0(sweep[b]) - x0(sweep[a]) > A.extent() + max_extent) break;
      const CarlesonBox B{samples[res.centers[sweep[b]]], res.shrunk_delta[sweep[b]]};
      ++res.pairs_tested;
      const auto hit = boxes_intersect(A, B, config.tolerance, config.max_iterations);
      if (hit.intersect) {
        ++res.disjointness_violations;
        res.violating_pairs.emplace_back(std::min(sweep[a], sweep[b]), std::max(sweep[a], sweep[b]));
      }
    }
  }
  return res;
}

std::vector<CarlesonBox> cover_boxes(const std::vector<Point>& samples, const CoverResult& cover,
                                     const CoverConfig& config, double factor) {
  std::vector<CarlesonBox> out;
  out.reserve(cover.centers.size());
  for (std::size_t s : cover.centers) out.push_back({samples[s], factor * config.delta(samples[s])});
  return out;
}

nlohmann::json OverlapStats::to_json() const {
  return {{"max_multiplicity", max_multiplicity}, {"histogram", histogram}, {"probes", probes}};
}

OverlapStats overlap_histogram(const std::vector<CarlesonBox>& boxes, const std::vector<Point>& probes,
                               unsigned threads) {
  // With a = |a| u: P_a z - a = (<z,u> - |a|) u and |P_a^perp z|^2 = |z|^2 - |<z,u>|^2.
  struct Prepared {
    Point axis;
    double modulus, delta;
  };
  // A box with delta >= |a| + 1 and delta >= 1 contains the whole open unit
  // ball: |P_a z - a| <= |z| + |a| < delta and |P_a^perp z| <= |z| < sqrt(delta).
  std::vector<Prepared> prepared;
  std::size_t universal = 0;
  prepared.reserve(boxes.size());
  for (const auto& b : boxes) {
    if (b.delta >= 1.0 && b.delta >= norm(b.center) + 1.0) {
      ++universal;
    } else {
      prepared.push_back({unit(b.center), norm(b.center), b.delta});
    }
  }
  auto count = [&](std::size_t i, std::uint64_t) {
    const Point& z = probes[i];
    std::size_t k = 0;
    if (norm(z) < 1.0) {
      k = universal;
    } else if (universal > 0) {
      for (const auto& b : boxes) k += box_membership(z, b) ? 1 : 0;
      return k;
    }
    double z_sq = 0.0;
    for (const auto& c : z) z_sq += std::norm(c);
    for (const auto& b : prepared) {
      std::complex<double> w = 0.0;
      for (std::size_t d = 0; d < z.size(); ++d) w += z[d] * std::conj(b.axis[d]);
      if (std::abs(w - b.modulus) < b.delta && z_sq - std::norm(w) < b.delta) ++k;
    }
    return k;
  };
  const auto counts = run_trials(probes.size(), 0, count, threads);
  OverlapStats stats;
  stats.probes = probes.size();
  for (std::size_t k : counts) {
    stats.max_multiplicity = std::max(stats.max_multiplicity, k);
    if (stats.histogram.size() <= k) stats.histogram.resize(k + 1, 0);
    ++stats.histogram[k];
  }
  return stats;
}

void write_cover_csv(std::ostream& out, const std::vector<Point>& samples, const CoverResult& cover,
                     const CoverConfig& config) {
  out << "order,sample,delta,shrunk_delta";
  for (std::size_t i = 1; i <= config.n; ++i) out << ",re_" << i << ",im_" << i;
  out << '\n';
  out.precision(17);
  for (std::size_t k = 0; k < cover.centers.size(); ++k) {
    const Point& z = samples[cover.centers[k]];
    out << k << ',' << cover.centers[k] << ',' << config.delta(z) << ',' << cover.shrunk_delta[k];
    for (const auto& c : z) out << ',' << c.real() << ',' << c.imag();
    out << '\n';
  }
}

nlohmann::json cover_diagnostics(const CoverResult& cover, const OverlapStats& overlap, const CoverConfig& config) {
  return {{"n", config.n},
          {"r", config.r},
          {"c", config.c},
          {"samples", cover.assigned.size()},
          {"centers", cover.centers.size()},
          {"uncovered", cover.uncovered},
          {"disjointness_violations", cover.disjointness_violations},
          {"violating_pairs", cover.violating_pairs},
          {"uncovered_samples", cover.uncovered_samples},
          {"pairs_tested", cover.pairs_tested},
          {"undecided", cover.undecided},
          {"monotone", cover.monotone},
          {"overlap", overlap.to_json()},
          {"overlap_bound", overlap_bound(config.n)}};
}

}  // namespace bergman
