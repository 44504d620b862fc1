#include "minstar/center_opt.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "minstar/error.hpp"
#include "minstar/random.hpp"

namespace minstar {

namespace {

constexpr std::size_t kBisectionStepCap = 200;
// Pairs within this relative distance of the optimum are carried as the basis.
constexpr double kBasisTolerance = 1e-6;

using Eigen::MatrixXd;
using Eigen::VectorXd;

Coords as_coords(const VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Point to_point(const VectorXd& v) { return Point(std::vector<double>(v.data(), v.data() + v.size())); }

void require_leaves(const PointSet& leaves) {
  if (leaves.size() < 2) throw Error(ErrorKind::input, "need at least two leaves");
}

}  // namespace

double objective(const PointSet& leaves, Coords center) {
  require_leaves(leaves);
  return evaluate_fast(leaves, center).dilation;
}

bool decision(const PointSet& leaves, Coords center, double lambda) {
  if (!(lambda >= 1)) throw Error(ErrorKind::empty_level_set, "decision level below 1");
  return objective(leaves, center) <= lambda;
}

void FocalPairs::add(Coords a, Coords b) {
  if (dim == 0) dim = a.size();
  if (a.size() != dim || b.size() != dim) throw Error(ErrorKind::input, "pair dimension mismatch");
  const double w = distance(a, b);
  if (w == 0) throw Error(ErrorKind::undefined_dilation, "pair with coincident points");
  first.insert(first.end(), a.begin(), a.end());
  second.insert(second.end(), b.begin(), b.end());
  weight.push_back(w);
}

double FocalPairs::min_weight() const { return *std::min_element(weight.begin(), weight.end()); }
double FocalPairs::max_weight() const { return *std::max_element(weight.begin(), weight.end()); }

double FocalPairs::excess(Coords x, double lambda, std::size_t* active) const {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t p = 0; p < size(); ++p) {
    const double s = std::sqrt(detail::squared_distance(&first[p * dim], x.data(), dim)) +
                     std::sqrt(detail::squared_distance(x.data(), &second[p * dim], dim));
    const double h = s - lambda * weight[p];
    if (h > best) {
      best = h;
      arg = p;
    }
  }
  if (active) *active = arg;
  return best;
}

FocalPairs all_pairs(const PointSet& leaves) {
  FocalPairs pairs;
  pairs.dim = leaves.dim();
  const std::size_t n = leaves.size();
  pairs.weight.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.add(leaves[i], leaves[j]);
  return pairs;
}

FeasibilityResult feasibility_min(const FocalPairs& pairs, double lambda, double eps_feas,
                                  FeasibilityStop stop) {
  if (pairs.empty()) throw Error(ErrorKind::input, "no pair constraints");
  if (!(lambda >= 1)) throw Error(ErrorKind::empty_level_set, "level below 1");
  if (!(eps_feas > 0)) throw Error(ErrorKind::input, "eps_feas must be positive");
  const std::size_t d = pairs.dim;
  const auto dd = static_cast<double>(d);

  VectorXd centre = VectorXd::Zero(static_cast<Eigen::Index>(d));
  double coord_scale = 0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t k = 0; k < d; ++k) {
      centre[static_cast<Eigen::Index>(k)] += 0.5 * (pairs.first[p * d + k] + pairs.second[p * d + k]);
      coord_scale = std::max({coord_scale, std::abs(pairs.first[p * d + k]), std::abs(pairs.second[p * d + k])});
    }
  }
  centre /= static_cast<double>(pairs.size());

  // Every minimizer y has 2|y - m_p| - lambda w_p <= h(y) <= h(centre) for each pair midpoint m_p.
  const double h0 = pairs.excess(as_coords(centre), lambda);
  double radius = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    double off = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const double m = 0.5 * (pairs.first[p * d + k] + pairs.second[p * d + k]);
      off += (m - centre[static_cast<Eigen::Index>(k)]) * (m - centre[static_cast<Eigen::Index>(k)]);
    }
    radius = std::min(radius, 0.5 * (h0 + lambda * pairs.weight[p]) + std::sqrt(off));
  }
  radius *= 1 + 1e-9;

  const double floor =
      32 * std::numeric_limits<double>::epsilon() * (lambda * pairs.max_weight() + coord_scale);
  const double tolerance = std::max(eps_feas, floor);

  VectorXd x = centre;
  MatrixXd shape = MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) * radius * radius;
  VectorXd best_x = centre;
  double best_h = h0;
  double lower = -std::numeric_limits<double>::infinity();
  VectorXd g(static_cast<Eigen::Index>(d));

  auto done = [&] {
    if (stop == FeasibilityStop::sign && (best_h <= 0 || lower > 0)) return true;
    return best_h - lower <= tolerance;
  };

  std::size_t it = 0;
  for (; it < kFeasibilityIterationCap; ++it) {
    std::size_t active = 0;
    const double h = pairs.excess(as_coords(x), lambda, &active);
    if (h < best_h) {
      best_h = h;
      best_x = x;
    }
    g.setZero();
    for (const double* focus : {&pairs.first[active * d], &pairs.second[active * d]}) {
      double len2 = 0;
      for (std::size_t k = 0; k < d; ++k) len2 += (x[static_cast<Eigen::Index>(k)] - focus[k]) * (x[static_cast<Eigen::Index>(k)] - focus[k]);
      if (len2 == 0) continue;
      const double len = std::sqrt(len2);
      for (std::size_t k = 0; k < d; ++k) g[static_cast<Eigen::Index>(k)] += (x[static_cast<Eigen::Index>(k)] - focus[k]) / len;
    }
    const VectorXd pg = shape * g;
    const double gpg = g.dot(pg);
    if (!(gpg > 0)) {
      // Zero subgradient: x minimizes h. Otherwise the ellipsoid has numerically collapsed.
      if (g.squaredNorm() == 0) lower = std::max(lower, h);
      break;
    }
    const double s = std::sqrt(gpg);
    lower = std::max(lower, h - s);
    if (done() || s <= floor) break;

    const double alpha = (h - best_h) / s;
    if (alpha >= 1) {
      lower = std::max(lower, best_h);
      break;
    }
    const VectorXd b = pg / s;
    const double tau = (1 + dd * alpha) / (dd + 1);
    const double sigma = 2 * (1 + dd * alpha) / ((dd + 1) * (1 + alpha));
    const double delta = dd * dd * (1 - alpha * alpha) / (dd * dd - 1);
    x -= tau * b;
    shape = delta * (shape - sigma * b * b.transpose());
    shape = 0.5 * (shape + shape.transpose()).eval();
  }
  if (it == kFeasibilityIterationCap && !done()) {
    throw Error(ErrorKind::solver, "ellipsoid method did not converge: lambda=" + std::to_string(lambda) +
                                       " best h=" + std::to_string(best_h) +
                                       " lower bound=" + std::to_string(lower));
  }
  lower = std::min(lower, best_h);
  return {to_point(best_x), best_h, lower, it};
}

void QcpConfig::validate() const {
  if (!(eps_opt > 0)) throw Error(ErrorKind::input, "eps_opt must be positive");
  if (!(eps_feas > 0)) throw Error(ErrorKind::input, "eps_feas must be positive");
  if (base_case_size < 4) throw Error(ErrorKind::input, "base case size must be at least 4");
  if (pass_cap == 0) throw Error(ErrorKind::input, "pass cap must be positive");
}

std::string_view to_string(Method m) { return m == Method::chan ? "chan" : "bisection"; }

OptResult solve_bisection(const PointSet& leaves, const QcpConfig& cfg) {
  cfg.validate();
  require_leaves(leaves);
  const FocalPairs pairs = all_pairs(leaves);
  const double w_min = pairs.min_weight(), w_max = pairs.max_weight();

  Point best = leaves.centroid();
  DilationReport report = evaluate_brute(leaves, best);
  double hi = report.dilation, lo = 1;
  std::size_t steps = 0;
  while (hi - lo > cfg.eps_opt * lo && steps < kBisectionStepCap) {
    ++steps;
    const double width = hi - lo;
    const double lambda = 0.5 * (lo + hi);
    const auto r = feasibility_min(pairs, lambda, cfg.eps_feas, FeasibilityStop::sign);
    const auto at = evaluate_brute(leaves, r.x);
    if (at.dilation < hi) {
      hi = at.dilation;
      best = r.x;
      report = at;
    }
    // min h_lambda <= (opt - lambda) * w for some pair weight w.
    const double certified = lambda + r.lower_bound / (r.lower_bound > 0 ? w_max : w_min);
    lo = std::min(std::max(lo, certified), hi);
    if (!r.feasible() && !r.infeasible() && hi - lo > 0.75 * width) break;
  }

  OptResult out;
  out.center = best;
  out.dilation = report.dilation;
  out.witness_a = report.witness_a;
  out.witness_b = report.witness_b;
  out.method = Method::bisection;
  out.iterations = steps;
  out.seed = cfg.rng_seed;
  out.lower_bound = lo;
  return out;
}

namespace {

struct Incumbent {
  Point x;
  double lambda;
  std::vector<std::size_t> basis;  // leaf indices of the near-active pairs
};

struct PassCapExceeded {};

class ChanSolver {
 public:
  ChanSolver(const PointSet& leaves, const QcpConfig& cfg, OptResult& stats)
      : leaves_(leaves), cfg_(cfg), stats_(stats), rng_(cfg.rng_seed) {}

  Incumbent solve(const std::vector<std::size_t>& set, Incumbent inc) {
    ++stats_.recursive_calls;
    if (set.size() <= cfg_.base_case_size) return base_case(set);

    std::vector<std::size_t> parts[3];
    for (std::size_t q = 0; q < 3; ++q)
      for (std::size_t k = 0; k < set.size(); ++k)
        if (k % 3 != q) parts[q].push_back(set[k]);
    std::vector<std::size_t> order{0, 1, 2};
    rng_.shuffle(order);

    // verified[q] holds the incumbent version that subset q was last checked against.
    std::size_t version = 1;
    std::size_t verified[3] = {0, 0, 0};
    for (std::size_t pass = 0; pass < cfg_.pass_cap; ++pass) {
      ++stats_.iterations;
      for (std::size_t q : order) {
        if (verified[q] == version) continue;
        ++stats_.decision_calls;
        stats_.decision_work += parts[q].size();
        if (decision(leaves_.subset(parts[q]), inc.x, inc.lambda * (1 + cfg_.eps_opt))) {
          verified[q] = version;
          continue;
        }
        std::vector<std::size_t> sub;
        std::set_union(parts[q].begin(), parts[q].end(), inc.basis.begin(), inc.basis.end(),
                       std::back_inserter(sub));
        if (sub.size() >= set.size()) return base_case(set);
        inc = solve(sub, std::move(inc));
        trace_.push_back(inc.lambda);
        verified[q] = ++version;
      }
      if (std::all_of(std::begin(verified), std::end(verified), [&](std::size_t v) { return v == version; }))
        return inc;
    }
    throw PassCapExceeded{};
  }

  const std::vector<double>& trace() const { return trace_; }

 private:
  Incumbent base_case(const std::vector<std::size_t>& set) {
    ++stats_.base_cases;
    const PointSet local = leaves_.subset(set);
    const OptResult r = solve_bisection(local, cfg_);
    Incumbent inc{r.center, r.dilation, {}};
    for (std::size_t i = 0; i < local.size(); ++i) {
      for (std::size_t j = i + 1; j < local.size(); ++j) {
        if (pair_dilation(local[i], local[j], r.center) >= r.dilation * (1 - kBasisTolerance)) {
          inc.basis.push_back(set[i]);
          inc.basis.push_back(set[j]);
        }
      }
    }
    std::sort(inc.basis.begin(), inc.basis.end());
    inc.basis.erase(std::unique(inc.basis.begin(), inc.basis.end()), inc.basis.end());
    return inc;
  }

  const PointSet& leaves_;
  const QcpConfig& cfg_;
  OptResult& stats_;
  Rng rng_;
  std::vector<double> trace_;
};

}  // namespace

OptResult solve_chan(const PointSet& leaves, const QcpConfig& cfg) {
  cfg.validate();
  require_leaves(leaves);
  if (leaves.size() <= cfg.base_case_size) {
    OptResult r = solve_bisection(leaves, cfg);
    r.method = Method::chan;
    r.base_cases = 1;
    return r;
  }

  OptResult out;
  out.method = Method::chan;
  out.seed = cfg.rng_seed;
  std::vector<std::size_t> all(leaves.size());
  std::iota(all.begin(), all.end(), 0);
  ChanSolver solver(leaves, cfg, out);
  try {
    const Incumbent inc = solver.solve(all, Incumbent{leaves.centroid(), 1.0, {}});
    const DilationReport report = evaluate_fast(leaves, inc.x);
    out.center = inc.x;
    out.dilation = report.dilation;
    out.witness_a = report.witness_a;
    out.witness_b = report.witness_b;
    out.incumbent_trace = solver.trace();
  } catch (const PassCapExceeded&) {
    const OptResult r = solve_bisection(leaves, cfg);
    out.center = r.center;
    out.dilation = r.dilation;
    out.witness_a = r.witness_a;
    out.witness_b = r.witness_b;
    out.lower_bound = r.lower_bound;
    out.fallback = true;
  }
  return out;
}

}  // namespace minstar
