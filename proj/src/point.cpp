#include "minstar/point.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "minstar/error.hpp"

namespace minstar {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::undefined_dilation: return "undefined_dilation";
    case ErrorKind::empty_level_set: return "empty_level_set";
    case ErrorKind::unsupported_dimension: return "unsupported_dimension";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::interiority: return "interiority";
    case ErrorKind::constants_undefined: return "constants_undefined";
    case ErrorKind::solver: return "solver";
    case ErrorKind::parse: return "parse";
    case ErrorKind::usage: return "usage";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

namespace {

void check_coords(Coords c) {
  if (c.size() < 2) throw Error(ErrorKind::input, "points need at least 2 coordinates");
  for (double v : c) {
    if (!std::isfinite(v)) throw Error(ErrorKind::input, "non-finite coordinate");
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) { check_coords(coords_); }

Point::Point(std::initializer_list<double> coords) : coords_(coords) { check_coords(coords_); }

Point::Point(Coords coords) : coords_(coords.begin(), coords.end()) { check_coords(coords_); }

PointSet PointSet::from_points(std::initializer_list<Point> points) {
  return from_points(std::span<const Point>(points.begin(), points.size()));
}

PointSet PointSet::from_points(std::span<const Point> points) {
  if (points.empty()) return PointSet();
  const std::size_t d = points.front().dim();
  std::vector<double> flat;
  flat.reserve(points.size() * d);
  for (const Point& p : points) {
    if (p.dim() != d) throw Error(ErrorKind::input, "points of mixed dimension");
    flat.insert(flat.end(), p.coords().begin(), p.coords().end());
  }
  return from_flat(d, std::move(flat));
}

PointSet PointSet::from_flat(std::size_t dim, std::vector<double> flat) {
  if (flat.empty()) return PointSet();
  if (dim < 2) throw Error(ErrorKind::input, "points need at least 2 coordinates");
  if (flat.size() % dim != 0) throw Error(ErrorKind::input, "coordinate count not a multiple of dimension");
  for (double v : flat) {
    if (!std::isfinite(v)) throw Error(ErrorKind::input, "non-finite coordinate");
  }
  const std::size_t n = flat.size() / dim;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::size_t i) { return flat.begin() + static_cast<std::ptrdiff_t>(i * dim); };
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::lexicographical_compare(row(i), row(i) + dim, row(j), row(j) + dim);
  });
  for (std::size_t k = 1; k < n; ++k) {
    if (std::equal(row(order[k - 1]), row(order[k - 1]) + dim, row(order[k]))) {
      throw Error(ErrorKind::input, "duplicate points at indices " +
                                        std::to_string(std::min(order[k - 1], order[k])) + " and " +
                                        std::to_string(std::max(order[k - 1], order[k])));
    }
  }
  return PointSet(dim, std::move(flat));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  std::vector<double> flat;
  flat.reserve(indices.size() * dim_);
  for (std::size_t i : indices) {
    auto p = (*this)[i];
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return PointSet(dim_, std::move(flat));
}

PointSet PointSet::without(std::size_t skip) const {
  std::vector<double> flat;
  flat.reserve(flat_.size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (i == skip) continue;
    auto p = (*this)[i];
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return PointSet(dim_, std::move(flat));
}

Point PointSet::centroid() const {
  if (empty()) throw Error(ErrorKind::input, "centroid of an empty point set");
  std::vector<double> c(dim_, 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t k = 0; k < dim_; ++k) c[k] += flat_[i * dim_ + k];
  }
  for (double& v : c) v /= static_cast<double>(size());
  return Point(std::move(c));
}

double distance(Coords a, Coords b) {
  if (a.size() != b.size()) throw Error(ErrorKind::input, "dimension mismatch");
  return std::sqrt(detail::squared_distance(a.data(), b.data(), a.size()));
}

double pair_dilation(Coords a, Coords b, Coords c) {
  if (a.size() != b.size() || a.size() != c.size()) throw Error(ErrorKind::input, "dimension mismatch");
  const double ab = distance(a, b);
  if (ab == 0.0) throw Error(ErrorKind::undefined_dilation, "dilation of coincident points");
  return (distance(a, c) + distance(c, b)) / ab;
}

}  // namespace minstar
