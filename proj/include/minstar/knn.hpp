#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "minstar/point.hpp"

namespace minstar {

/// Row i lists the k nearest neighbours of point i, nearest first, with
/// distance ties broken by smaller index.
class NeighborTable {
 public:
  NeighborTable() = default;
  NeighborTable(std::size_t k, std::vector<std::size_t> flat) : k_(k), flat_(std::move(flat)) {}

  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return k_ == 0 ? 0 : flat_.size() / k_; }
  std::span<const std::size_t> operator[](std::size_t i) const noexcept {
    return {flat_.data() + i * k_, k_};
  }

 private:
  std::size_t k_ = 0;
  std::vector<std::size_t> flat_;
};

/// Static kd-tree over a point set, exact k-nearest-neighbour queries.
class KdTree {
 public:
  explicit KdTree(const PointSet& points, std::size_t leaf_size = 8);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Indices of the k points nearest to `query` ordered by (distance, index),
  /// skipping index `exclude`.
  std::vector<std::size_t> nearest(Coords query, std::size_t k, std::size_t exclude = npos) const;

  /// Point indices in leaf order; consecutive entries are spatially close.
  std::span<const std::size_t> leaf_order() const noexcept { return perm_; }

 private:
  struct Node {
    std::size_t begin, end;
    std::size_t left = 0, right = 0;  // 0 marks a leaf (the root is never a child)
  };
  struct Candidate {
    double d2;
    std::size_t index;
    bool operator<(const Candidate& o) const noexcept {
      return d2 < o.d2 || (d2 == o.d2 && index < o.index);
    }
  };

  std::size_t build(std::size_t begin, std::size_t end);
  double box_distance2(std::size_t node, const double* q) const noexcept;
  void search(std::size_t node, const double* q, std::size_t k, std::size_t exclude,
              std::vector<Candidate>& heap) const;

  const PointSet& points_;
  std::size_t leaf_size_;
  std::vector<std::size_t> perm_;
  std::vector<double> sorted_;  // coordinates in perm_ order
  std::vector<Node> nodes_;
  std::vector<double> lo_, hi_;  // per-node bounding boxes, dim entries each
};

/// Exact k nearest neighbours of every point; k is clamped to n-1.
NeighborTable all_knn(const PointSet& points, std::size_t k);

}  // namespace minstar
