#pragma once

#include <array>
#include <vector>

#include "minstar/point.hpp"

namespace minstar {

/// Level set {x : (|xa| + |xb|) / |ab| <= level} of one pair constraint.
/// In the plane this is a filled ellipse; in higher dimensions a spheroid.
class Ellipse {
 public:
  Ellipse(Point focus_a, Point focus_b, double level);

  const Point& focus_a() const noexcept { return focus_a_; }
  const Point& focus_b() const noexcept { return focus_b_; }
  double level() const noexcept { return level_; }
  /// Constant distance sum `level * |ab|`.
  double sum_bound() const noexcept { return sum_bound_; }
  double focal_distance() const noexcept { return focal_distance_; }
  double semi_major() const noexcept { return 0.5 * sum_bound_; }
  double semi_minor() const noexcept { return semi_minor_; }
  Point center() const;

 private:
  Point focus_a_;
  Point focus_b_;
  double level_;
  double focal_distance_;
  double sum_bound_;
  double semi_minor_;
};

/// Implicit quadratic a x^2 + b xy + c y^2 + d x + e y + f = 0.
struct Conic {
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;

  double operator()(double x, double y) const noexcept {
    return a * x * x + b * x * y + c * y * y + d * x + e * y + f;
  }
  std::array<double, 2> gradient(double x, double y) const noexcept {
    return {2 * a * x + b * y + d, b * x + 2 * c * y + e};
  }
};

Ellipse ellipse_from_pair(Coords v_i, Coords v_j, double level);

/// Relative tolerance for boundary comparisons.
inline constexpr double kGeomTolerance = 1e-9;

/// Inclusive: |pa| + |pb| <= sum_bound * (1 + rel_tol).
bool ellipse_contains(const Ellipse& e, Coords p, double rel_tol = kGeomTolerance);

/// Planar ellipse boundary as a conic, negative inside. The quadratic is
/// normalised so that it equals q(p) - 1 with q the ellipse's quadratic form.
Conic ellipse_to_conic(const Ellipse& e);

struct ConicIntersection {
  std::vector<Point> points;
  /// Set when the two curves are (nearly) identical and no finite set of
  /// crossings describes their intersection.
  bool degenerate = false;
};

/// Parameter-space distance below which two roots are merged.
inline constexpr double kRootMergeTolerance = 1e-7;

/// Real intersection points of two ellipse-like conics (at most four).
ConicIntersection conic_intersections(const Conic& c1, const Conic& c2);

}  // namespace minstar
