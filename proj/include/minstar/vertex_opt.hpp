#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "minstar/center_opt.hpp"
#include "minstar/ellipse.hpp"
#include "minstar/point.hpp"
#include "minstar/star_eval.hpp"

namespace minstar {

/// floor(log_rho |p center|); a point on a shell boundary gets the lower index.
long annulus_index(Coords p, Coords center, double rho);

/// Distance from `r` to the boundary of planar ellipse `e` along direction theta.
/// `r` must lie strictly inside `e`.
double radial_boundary(const Ellipse& e, Coords r, double theta);

struct Arc {
  std::size_t ellipse_id;
  double theta_lo, theta_hi;
};

/// Boundary of an intersection of planar ellipses as seen from an interior
/// reference point: arcs tile [0, 2pi] in ascending order, each naming the
/// ellipse that is nearest to the reference point over its angular range.
class ArcRing {
 public:
  ArcRing(Point ref, std::vector<Ellipse> ellipses, std::vector<Arc> arcs);

  const Point& ref() const noexcept { return ref_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  const std::vector<Ellipse>& ellipses() const noexcept { return ellipses_; }

  /// Index into arcs() of the arc covering theta, by binary search.
  std::size_t arc_at(double theta) const;
  /// Envelope radius at theta.
  double radius_at(double theta) const;

  struct Shape {
    double mx, my, q11, q12, q22;
    double radius(double rx, double ry, double theta) const;
  };

 private:
  Point ref_;
  std::vector<Ellipse> ellipses_;
  std::vector<Arc> arcs_;
  std::vector<Shape> shapes_;
};

/// Polar angle of p about r, normalised to [0, 2pi).
double polar_angle(Coords r, Coords p);

/// Lower radial envelope of the ellipses about r, by divide and conquer.
/// Ellipses that provably never reach the envelope are dropped first.
ArcRing build_arc_ring(std::vector<Ellipse> ellipses, Point r);

/// Relative slack by which points just outside the envelope are still accepted.
inline constexpr double kMembershipTolerance = 1e-9;

/// Whether p lies in the region, counting points within the tolerance of the
/// boundary as inside so that boundary ties are never discarded.
bool arc_ring_contains(const ArcRing& ring, Coords p);

struct RegionEllipses {
  std::vector<Ellipse> ellipses;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // focus indices, one per ellipse
  std::size_t truncated = 0;  // partners dropped by the per-point caps
  bool fallback = false;      // caps were exceeded below the gamma threshold
};

/// Radius ratio of the annuli about the unconstrained optimum.
double region_rho(const EvalConstants& consts);

/// Pair ellipses at level `dilation` whose intersection bounds the region of
/// centers that beat `dilation`. Planar input only.
RegionEllipses select_region_ellipses(const PointSet& leaves, Coords center, double dilation, Coords optimum,
                                      const EvalConstants& consts = EvalConstants::fast());

struct ConstrainedResult {
  std::size_t center_index = 0;
  double dilation = 1;
  std::size_t loop_iterations = 0;
  std::vector<std::size_t> pruned_counts;  // survivors after each pruning step
  std::vector<double> dilation_trace;      // dilation of each sampled center
  std::size_t brute_membership_rounds = 0; // iterations that tested survivors directly
  std::size_t truncated_pairs = 0;
  bool fallback = false;                   // iteration cap hit, finished by brute force
  std::uint64_t seed = 0;
  Point unconstrained_center;
  double unconstrained_dilation = 1;
};

ConstrainedResult solve_constrained(const PointSet& leaves, const QcpConfig& cfg = {},
                                    const EvalConstants& consts = EvalConstants::fast(),
                                    std::uint64_t rng_seed = 1);

/// Tries every input point as the center; smallest index wins ties.
ConstrainedResult solve_constrained_brute(const PointSet& leaves);

}  // namespace minstar
