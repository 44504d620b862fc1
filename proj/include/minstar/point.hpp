#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace minstar {

using Coords = std::span<const double>;

/// A point in R^d, d >= 2, with finite coordinates.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);
  explicit Point(Coords coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  Coords coords() const noexcept { return coords_; }
  operator Coords() const noexcept { return coords_; }  // NOLINT(google-explicit-constructor)

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

/// Ordered, pairwise-distinct points of a common dimension, stored contiguously.
class PointSet {
 public:
  PointSet() = default;

  /// Validates dimension agreement, finiteness and distinctness.
  static PointSet from_points(std::span<const Point> points);
  static PointSet from_points(std::initializer_list<Point> points);
  /// `flat` holds size*dim coordinates, row-major.
  static PointSet from_flat(std::size_t dim, std::vector<double> flat);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : flat_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return flat_.empty(); }

  Coords operator[](std::size_t i) const noexcept {
    return Coords(flat_.data() + i * dim_, dim_);
  }
  Point point(std::size_t i) const { return Point((*this)[i]); }
  std::span<const double> flat() const noexcept { return flat_; }

  /// Points at the given indices, in that order. Indices must be distinct.
  PointSet subset(std::span<const std::size_t> indices) const;
  /// All points except index `skip`.
  PointSet without(std::size_t skip) const;
  Point centroid() const;

 private:
  PointSet(std::size_t dim, std::vector<double> flat) : dim_(dim), flat_(std::move(flat)) {}

  std::size_t dim_ = 0;
  std::vector<double> flat_;
};

/// Euclidean distance; throws ErrorKind::input on dimension mismatch.
double distance(Coords a, Coords b);

/// (|ac| + |cb|) / |ab|; throws ErrorKind::undefined_dilation when a == b.
double pair_dilation(Coords a, Coords b, Coords c);

namespace detail {

inline double squared_distance(const double* a, const double* b, std::size_t d) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

}  // namespace detail
}  // namespace minstar
