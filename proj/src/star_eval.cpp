#include "minstar/star_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "minstar/error.hpp"

namespace minstar {

std::string_view to_string(Profile p) { return p == Profile::fast ? "fast" : "safe"; }

Profile parse_profile(std::string_view s) {
  if (s == "fast") return Profile::fast;
  if (s == "safe") return Profile::safe;
  throw Error(ErrorKind::usage, "unknown profile '" + std::string(s) + "'");
}

EvalConstants EvalConstants::fast() { return EvalConstants{4.0, 16, 16, Profile::fast}; }

EvalConstants EvalConstants::safe(std::size_t dim) {
  return EvalConstants{4.0, derive_constants(4.0, dim).k, 64, Profile::safe};
}

EvalConstants EvalConstants::for_profile(Profile p, std::size_t dim) {
  return p == Profile::fast ? fast() : safe(dim);
}

void EvalConstants::validate() const {
  if (!(gamma_threshold > 3.0)) throw Error(ErrorKind::constants_undefined, "Gamma must exceed 3");
  if (knn_k < 1) throw Error(ErrorKind::constants_undefined, "k must be at least 1");
  if (rank_window_l < 1) throw Error(ErrorKind::constants_undefined, "l must be at least 1");
}

DerivedConstants derive_constants(double gamma_threshold, std::size_t dim) {
  if (!(gamma_threshold > 3.0)) throw Error(ErrorKind::constants_undefined, "Gamma must exceed 3");
  if (dim < 2) throw Error(ErrorKind::unsupported_dimension, "dimension must be at least 2");
  DerivedConstants out{};
  out.phi = (gamma_threshold - 1.0) / 2.0;
  out.gamma = (2.0 / 3.0) * (1.0 - 1.0 / out.phi);
  out.sigma = out.gamma / std::sqrt(static_cast<double>(dim));
  const double cells = std::pow(2.0 / out.sigma, static_cast<double>(dim));
  if (!std::isfinite(cells) || cells > kMaxDerivedK) {
    throw Error(ErrorKind::constants_undefined, "neighbour count overflows; Gamma too close to 3");
  }
  // Exact integers (e.g. 162 for Gamma=4, d=2) must not round up on a stray ulp.
  out.k = static_cast<std::size_t>(std::ceil(cells * (1.0 - 1e-12)));
  return out;
}

namespace {

struct Scorer {
  const PointSet& leaves;
  std::vector<double> to_center;
  DilationReport best;

  Scorer(const PointSet& v, Coords c) : leaves(v), to_center(v.size()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      to_center[i] = std::sqrt(detail::squared_distance(v[i].data(), c.data(), v.dim()));
    }
    best.dilation = -1.0;
  }

  // Same arithmetic as pair_dilation(V[i], V[j], c) for i < j.
  double value(std::size_t i, std::size_t j) const noexcept {
    const double ab = std::sqrt(detail::squared_distance(leaves[i].data(), leaves[j].data(), leaves.dim()));
    return (to_center[i] + to_center[j]) / ab;
  }

  void offer(std::size_t i, std::size_t j) noexcept {
    if (j < i) std::swap(i, j);
    const double v = value(i, j);
    if (v > best.dilation ||
        (v == best.dilation && std::make_pair(i, j) < std::make_pair(best.witness_a, best.witness_b))) {
      best = {v, i, j};
    }
  }
};

void check_center(const PointSet& leaves, Coords center) {
  if (!leaves.empty() && center.size() != leaves.dim()) throw Error(ErrorKind::input, "center dimension mismatch");
  for (double x : center) {
    if (!std::isfinite(x)) throw Error(ErrorKind::input, "non-finite center");
  }
}

CandidatePairList dedup(std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  for (auto& p : pairs) {
    if (p.second < p.first) std::swap(p.first, p.second);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return CandidatePairList{std::move(pairs)};
}

}  // namespace

DilationReport evaluate_brute(const PointSet& leaves, Coords center) {
  check_center(leaves, center);
  if (leaves.size() < 2) return {};
  Scorer s(leaves, center);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      const double v = s.value(i, j);
      if (v > s.best.dilation) s.best = {v, i, j};
    }
  }
  return s.best;
}

CandidatePairList candidates_high(const NeighborTable& knn) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(knn.size() * knn.k());
  for (std::size_t i = 0; i < knn.size(); ++i) {
    for (std::size_t j : knn[i]) pairs.emplace_back(i, j);
  }
  return dedup(std::move(pairs));
}

CandidatePairList candidates_high(const PointSet& leaves, const EvalConstants& consts) {
  consts.validate();
  if (leaves.size() < 2) return {};
  return candidates_high(all_knn(leaves, consts.knn_k));
}

std::vector<std::size_t> distance_order(const PointSet& leaves, Coords center) {
  check_center(leaves, center);
  std::vector<double> d2(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    d2[i] = std::sqrt(detail::squared_distance(leaves[i].data(), center.data(), leaves.dim()));
  }
  std::vector<std::size_t> order(leaves.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return d2[a] < d2[b] || (d2[a] == d2[b] && a < b);
  });
  return order;
}

CandidatePairList candidates_low(const PointSet& leaves, Coords center, const EvalConstants& consts) {
  consts.validate();
  const auto order = distance_order(leaves, center);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t s = 0; s < order.size(); ++s) {
    for (std::size_t t = s + 1; t < order.size() && t - s <= consts.rank_window_l; ++t) {
      pairs.emplace_back(order[s], order[t]);
    }
  }
  return dedup(std::move(pairs));
}

DilationReport evaluate_fast(const PointSet& leaves, Coords center, const EvalConstants& consts) {
  consts.validate();
  check_center(leaves, center);
  const std::size_t n = leaves.size();
  if (n < 2) return {};
  Scorer s(leaves, center);

  const NeighborTable knn = all_knn(leaves, consts.knn_k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : knn[i]) s.offer(i, j);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.to_center[a] < s.to_center[b] || (s.to_center[a] == s.to_center[b] && a < b);
  });
  const std::size_t l = consts.rank_window_l;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n && b - a <= l; ++b) s.offer(order[a], order[b]);
  }
  return s.best;
}

double diagnostic_rho(double dilation) {
  const double d = std::max(dilation, 1.0 + 1e-6);
  return std::sqrt((d + 1.0) / (d - 1.0)) + 1e-6;
}

}  // namespace minstar
