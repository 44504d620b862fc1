#include "minstar/knn.hpp"

#include <algorithm>
#include <numeric>

#include "minstar/error.hpp"

namespace minstar {

KdTree::KdTree(const PointSet& points, std::size_t leaf_size)
    : points_(points), leaf_size_(std::max<std::size_t>(leaf_size, 1)), perm_(points.size()) {
  std::iota(perm_.begin(), perm_.end(), 0);
  if (!points.empty()) {
    nodes_.reserve(2 * points.size() / leaf_size_ + 2);
    build(0, points.size());
    sorted_.reserve(points.size() * points.dim());
    for (std::size_t i : perm_) {
      auto p = points[i];
      sorted_.insert(sorted_.end(), p.begin(), p.end());
    }
  }
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const std::size_t d = points_.dim();
  const std::size_t id = nodes_.size();
  nodes_.push_back({begin, end});
  lo_.resize(lo_.size() + d);
  hi_.resize(hi_.size() + d);
  double* lo = lo_.data() + id * d;
  double* hi = hi_.data() + id * d;
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] = points_[perm_[begin]][k];
    hi[k] = lo[k];
  }
  for (std::size_t i = begin + 1; i < end; ++i) {
    auto p = points_[perm_[i]];
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  if (end - begin <= leaf_size_) return id;

  std::size_t axis = 0;
  for (std::size_t k = 1; k < d; ++k) {
    if (hi[k] - lo[k] > hi[axis] - lo[axis]) axis = k;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin),
                   perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                   perm_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) { return points_[a][axis] < points_[b][axis]; });
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::box_distance2(std::size_t node, const double* q) const noexcept {
  const std::size_t d = points_.dim();
  const double* lo = lo_.data() + node * d;
  const double* hi = hi_.data() + node * d;
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double t = 0.0;
    if (q[k] < lo[k]) t = lo[k] - q[k];
    else if (q[k] > hi[k]) t = q[k] - hi[k];
    s += t * t;
  }
  return s;
}

void KdTree::search(std::size_t node, const double* q, std::size_t k, std::size_t exclude,
                    std::vector<Candidate>& heap) const {
  const Node& nd = nodes_[node];
  if (nd.left == 0) {
    const std::size_t d = points_.dim();
    for (std::size_t i = nd.begin; i < nd.end; ++i) {
      const std::size_t idx = perm_[i];
      if (idx == exclude) continue;
      const Candidate c{detail::squared_distance(&sorted_[i * d], q, d), idx};
      if (heap.size() < k) {
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end());
      } else if (c < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = c;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }
  double dl = box_distance2(nd.left, q), dr = box_distance2(nd.right, q);
  std::size_t first = nd.left, second = nd.right;
  if (dr < dl) {
    std::swap(first, second);
    std::swap(dl, dr);
  }
  // Equal distances may still hide a smaller index, so only strictly farther boxes are pruned.
  if (heap.size() < k || dl <= heap.front().d2) search(first, q, k, exclude, heap);
  if (heap.size() < k || dr <= heap.front().d2) search(second, q, k, exclude, heap);
}

std::vector<std::size_t> KdTree::nearest(Coords query, std::size_t k, std::size_t exclude) const {
  if (query.size() != points_.dim()) throw Error(ErrorKind::input, "dimension mismatch");
  std::vector<Candidate> heap;
  if (k == 0 || nodes_.empty()) return {};
  heap.reserve(k + 1);
  search(0, query.data(), k, exclude, heap);
  std::sort_heap(heap.begin(), heap.end());
  std::vector<std::size_t> out(heap.size());
  for (std::size_t i = 0; i < heap.size(); ++i) out[i] = heap[i].index;
  return out;
}

NeighborTable all_knn(const PointSet& points, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::input, "k must be positive");
  const std::size_t n = points.size();
  if (n < 2) return NeighborTable();
  k = std::min(k, n - 1);
  const KdTree tree(points);
  std::vector<std::size_t> flat(n * k);
  for (std::size_t i : tree.leaf_order()) {
    const auto row = tree.nearest(points[i], k, i);
    std::copy(row.begin(), row.end(), flat.begin() + static_cast<std::ptrdiff_t>(i * k));
  }
  return NeighborTable(k, std::move(flat));
}

}  // namespace minstar
