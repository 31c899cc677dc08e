#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bergman/random.hpp"
#include "bergman/report.hpp"

namespace bergman {

using Point = std::vector<std::complex<double>>;

/// sum a_i conj(b_i)
std::complex<double> inner(const Point& a, const Point& b);
double norm(const Point& a);

/// Q_delta(a) = {z : |P_a z - a| < delta, |P_a^perp z| < sqrt(delta)}, with
/// P_a the projection onto the complex line through a.
struct CarlesonBox {
  Point center;
  double delta = 0.0;

  /// sup |x - a| over the box.
  double extent() const;
};

bool box_membership(const Point& z, const CarlesonBox& box);

/// Closed form: the box lies in {rho < |z| < 1} iff |a| - delta >= rho and
/// (|a| + delta)^2 + delta <= 1.
bool box_in_shell(const CarlesonBox& box, double rho);

struct IntersectionResult {
  bool intersect = true;
  /// False when neither a common point nor a separating direction was found
  /// within the iteration cap; `intersect` is then true (conservative).
  bool decided = true;
  std::size_t iterations = 0;
  double gap = 0.0;
};

/// Alternating projections between the closures. Intersect when the gap
/// drops below tol * min(delta); disjoint once the support functions along
/// the current gap direction separate the boxes.
IntersectionResult boxes_intersect(const CarlesonBox& a, const CarlesonBox& b, double tol = 1e-10,
                                   std::size_t max_iterations = 500);

inline constexpr double kContainmentConstant = 200.0;

struct CoverConfig {
  std::size_t n = 2;
  double r = 0.5;
  double c = 1e-3;
  double shrink = 1.0 / (kContainmentConstant * kContainmentConstant);
  double dilate = kContainmentConstant * kContainmentConstant;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  /// Intersection tests for the greedy discard.
  double tolerance = 1e-10;
  std::size_t max_iterations = 500;
  unsigned threads = 1;

  /// 1/4 < r < 1, 0 < c < min((r - 1/4)/4, 1/10), samples >= 1.
  void validate() const;
  /// delta(z) = c (1 - |z|)
  double delta(const Point& z) const;
};

/// c = 1/(10 * 200^3), the margin fixed by the covering argument.
double covering_margin();

/// N(n) + 1 with N(n) = 200^{6n+6}.
double overlap_bound(std::size_t n);

/// Uniform in {r < |z| < 1}.
Point sample_shell_point(Rng& rng, std::size_t n, double r);
std::vector<Point> sample_shell(const CoverConfig& config);

/// Strictly inside the box; with boundary bias the radii are pushed within
/// ~1e-9 (relative) of the boundary, but never closer than a few ulps.
Point sample_in_box(const CarlesonBox& box, Rng& rng, bool boundary_biased);

/// The box distortion bounds for z in Omega_r and z' in Q_{delta(z)}(z):
/// parts "norm_sq_ratio", "distance_ratio", "modulus_ratio", "point_in_shell",
/// "box_in_shell", and, when probes > 0, "containment_forward" (probes of
/// Q_{delta(z')}(z') inside Q_{200 delta(z)}(z)) and "containment_backward".
/// A z' outside the box is reported (details.precondition = false), not thrown.
VerificationReport check_box_distortion(const Point& z, const Point& zp, const CoverConfig& config,
                                        std::size_t probes = 0, std::uint64_t seed = 0);

struct CoverResult {
  /// Sample indices of the selected centers, in selection order.
  std::vector<std::size_t> centers;
  /// Shrunk radius shrink * delta(z_s) of each center.
  std::vector<double> shrunk_delta;
  /// Per sample: selection position of the center that discarded it (or itself).
  std::vector<std::size_t> assigned;
  std::size_t uncovered = 0;
  std::vector<std::size_t> uncovered_samples;
  /// Independent pairwise check of the shrunk boxes.
  std::size_t disjointness_violations = 0;
  /// Pairs of selection positions whose shrunk boxes intersect.
  std::vector<std::pair<std::size_t, std::size_t>> violating_pairs;
  std::size_t pairs_tested = 0;
  /// Intersection tests that hit the iteration cap (treated as intersecting).
  std::size_t undecided = 0;
  bool monotone = true;
};

CoverResult greedy_cover(const std::vector<Point>& samples, const CoverConfig& config);

/// Boxes Q_{factor * delta(z_s)}(z_s) for the selected centers.
std::vector<CarlesonBox> cover_boxes(const std::vector<Point>& samples, const CoverResult& cover,
                                     const CoverConfig& config, double factor);

struct OverlapStats {
  std::size_t max_multiplicity = 0;
  /// histogram[k]: probes contained in exactly k boxes.
  std::vector<std::size_t> histogram;
  std::size_t probes = 0;

  nlohmann::json to_json() const;
};

OverlapStats overlap_histogram(const std::vector<CarlesonBox>& boxes, const std::vector<Point>& probes,
                               unsigned threads = 1);

/// CSV: order,sample,delta,shrunk_delta,re_1,im_1,...,re_n,im_n
void write_cover_csv(std::ostream& out, const std::vector<Point>& samples, const CoverResult& cover,
                     const CoverConfig& config);

nlohmann::json cover_diagnostics(const CoverResult& cover, const OverlapStats& overlap, const CoverConfig& config);

}  // namespace bergman
