#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "minstar/center_opt.hpp"
#include "minstar/error.hpp"
#include "minstar/io.hpp"
#include "minstar/random.hpp"

using namespace minstar;

namespace {

const double kSqrt3 = std::sqrt(3.0);

PointSet unit_square() {
  return PointSet::from_points({Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}});
}

PointSet equilateral() {
  return PointSet::from_points({Point{0, 0}, Point{1, 0}, Point{0.5, kSqrt3 / 2}});
}

// Explicit O(n^2) pair loop, independent of the evaluators.
double brute_objective(const PointSet& v, Coords x) {
  double best = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      best = std::max(best, (distance(v[i], x) + distance(x, v[j])) / distance(v[i], v[j]));
  return best;
}

double brute_excess(const PointSet& v, Coords x, double lambda) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      best = std::max(best, distance(v[i], x) + distance(x, v[j]) - lambda * distance(v[i], v[j]));
  return best;
}

struct GridMin {
  double value;
  Point at;
  double spacing;
};

// Dense scan of a planar function over the bounding box of v padded by `pad`.
template <typename F>
GridMin grid_scan(const PointSet& v, F f, int steps = 400, double pad = 0.5) {
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (std::size_t i = 0; i < v.size(); ++i)
    for (int k = 0; k < 2; ++k) {
      lo[k] = std::min(lo[k], v[i][k]);
      hi[k] = std::max(hi[k], v[i][k]);
    }
  const double span = std::max(hi[0] - lo[0], hi[1] - lo[1]) + 2 * pad;
  const double h = span / steps;
  GridMin best{std::numeric_limits<double>::infinity(), Point{0, 0}, h};
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; b <= steps; ++b) {
      const Point x{lo[0] - pad + a * h, lo[1] - pad + b * h};
      const double val = f(x);
      if (val < best.value) best = {val, x, h};
    }
  }
  return best;
}

PointSet random_instance(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<double> flat(n * d);
  for (double& x : flat) x = rng.uniform();
  return PointSet::from_flat(d, flat);
}

}  // namespace

TEST(Objective, ClosedForms) {
  EXPECT_NEAR(objective(unit_square(), Point{0.5, 0.5}), std::sqrt(2.0), 1e-15);
  const auto two = PointSet::from_points({Point{0, 0}, Point{1, 0}});
  EXPECT_EQ(objective(two, Point{0.5, 0}), 1.0);
  EXPECT_THROW(objective(PointSet::from_points({Point{1, 1}}), Point{0, 0}), Error);
}

TEST(Objective, MatchesPairLoop) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto v = random_instance(rng, 3 + rng.index(60), 2 + rng.index(2));
    std::vector<double> x(v.dim());
    for (double& c : x) c = rng.uniform(-1, 2);
    EXPECT_NEAR(objective(v, Point(x)), brute_objective(v, Point(x)), 1e-12 * brute_objective(v, Point(x)));
  }
}

TEST(Decision, Thresholds) {
  EXPECT_TRUE(decision(unit_square(), Point{0.5, 0.5}, 1.5));
  EXPECT_FALSE(decision(unit_square(), Point{0.5, 0.5}, 1.4));
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto v = random_instance(rng, 3 + rng.index(30), 2);
    const Point x{rng.uniform(), rng.uniform()};
    const double f = brute_objective(v, x);
    const double lambda = f * rng.uniform(0.9, 1.1);
    if (std::abs(lambda - f) < 1e-9 * f) continue;
    EXPECT_EQ(decision(v, x, lambda), f <= lambda);
  }
}

TEST(FocalPairs, ExcessMatchesPairLoop) {
  Rng rng(12);
  const auto v = random_instance(rng, 20, 3);
  const auto pairs = all_pairs(v);
  EXPECT_EQ(pairs.size(), 190u);
  for (int t = 0; t < 50; ++t) {
    const Point x{rng.uniform(), rng.uniform(), rng.uniform()};
    const double lambda = rng.uniform(1, 5);
    EXPECT_NEAR(pairs.excess(x, lambda), brute_excess(v, x, lambda), 1e-12);
  }
}

TEST(FeasibilityMin, SinglePairInterior) {
  FocalPairs pairs;
  pairs.add(Point{0, 0}, Point{2, 0});
  const auto r = feasibility_min(pairs, 2.0, 1e-10);
  EXPECT_LT(r.h, 0);
  EXPECT_TRUE(r.feasible());
  EXPECT_LE(distance(Point{0, 0}, r.x) + distance(r.x, Point{2, 0}), 4.0);
  // Minimum of |v_i x| + |x v_j| - 2|v_i v_j| is |v_i v_j| - 2|v_i v_j| = -2.
  EXPECT_NEAR(r.h, -2.0, 1e-9);
  EXPECT_LE(r.lower_bound, r.h);
}

TEST(FeasibilityMin, EquilateralBelowOptimumIsInfeasible) {
  const auto pairs = all_pairs(equilateral());
  const auto r = feasibility_min(pairs, 1.1, 1e-10);
  EXPECT_GT(r.h, 0);
  EXPECT_GT(r.lower_bound, 0);
  // At the centroid every pair sums to 2/sqrt(3), so min h = 2/sqrt(3) - 1.1.
  EXPECT_NEAR(r.h, 2 / kSqrt3 - 1.1, 1e-9);
  const auto s = feasibility_min(pairs, 1.1, 1e-10, FeasibilityStop::sign);
  EXPECT_TRUE(s.infeasible());
  EXPECT_LE(s.iterations, r.iterations);
}

TEST(FeasibilityMin, AgreesWithGridScan) {
  Rng rng(21);
  int decided = 0;
  for (int t = 0; t < 25; ++t) {
    const auto v = random_instance(rng, 3 + rng.index(6), 2);
    const auto pairs = all_pairs(v);
    const double opt = solve_bisection(v).dilation;
    const double lambda = std::max(1.0, opt * rng.uniform(0.9, 1.1));
    const auto r = feasibility_min(pairs, lambda, 1e-10);
    const auto g = grid_scan(v, [&](const Point& x) { return brute_excess(v, x, lambda); }, 300);
    // h is 2-Lipschitz, so the grid minimum is within sqrt(2) * spacing of the true minimum.
    const double slack = std::sqrt(2.0) * g.spacing;
    EXPECT_LE(r.h, g.value + 1e-9) << "trial " << t;
    EXPECT_GE(r.h, g.value - slack - 1e-9) << "trial " << t;
    EXPECT_LE(r.lower_bound, g.value + 1e-9);
    EXPECT_NEAR(r.h, brute_excess(v, r.x, lambda), 1e-12);
    if (std::abs(g.value) > slack) {
      ++decided;
      EXPECT_EQ(r.h <= 0, g.value <= 0) << "trial " << t;
    }
  }
  EXPECT_GT(decided, 10);
}

TEST(FeasibilityMin, RejectsBadInput) {
  EXPECT_THROW(feasibility_min(FocalPairs{}, 2.0, 1e-10), Error);
  const auto pairs = all_pairs(equilateral());
  EXPECT_THROW(feasibility_min(pairs, 0.5, 1e-10), Error);
  EXPECT_THROW(feasibility_min(pairs, 2.0, 0.0), Error);
}

TEST(SolveBisection, TwoPoints) {
  const auto r = solve_bisection(PointSet::from_points({Point{0, 0}, Point{3, 4}}));
  EXPECT_NEAR(r.dilation, 1.0, 1e-12);
  EXPECT_NEAR(distance(Point{0, 0}, r.center) + distance(r.center, Point{3, 4}), 5.0, 1e-9);
}

TEST(SolveBisection, EquilateralTriangle) {
  const auto r = solve_bisection(equilateral());
  EXPECT_NEAR(r.dilation, 2 / kSqrt3, 1e-6);
  EXPECT_NEAR(r.center[0], 0.5, 1e-6);
  EXPECT_NEAR(r.center[1], kSqrt3 / 6, 1e-6);
  EXPECT_EQ(r.method, Method::bisection);
}

TEST(SolveBisection, UnitSquare) {
  const auto r = solve_bisection(unit_square());
  EXPECT_NEAR(r.dilation, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(r.center[0], 0.5, 1e-6);
  EXPECT_NEAR(r.center[1], 0.5, 1e-6);
}

TEST(SolveBisection, RegularTetrahedron) {
  // Symmetric optimum at the barycentre: each pair sums to 2 * sqrt(3/8) over edge 1.
  const double s = 1 / std::sqrt(8.0);
  const auto v = PointSet::from_points(
      {Point{s, s, s}, Point{s, -s, -s}, Point{-s, s, -s}, Point{-s, -s, s}});
  const auto r = solve_bisection(v);
  EXPECT_NEAR(r.dilation, 2 * std::sqrt(3.0 / 8.0), 1e-8);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(r.center[k], 0.0, 1e-6);
}

TEST(SolveBisection, ReportsConsistentResult) {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const auto v = random_instance(rng, 3 + rng.index(20), 2 + rng.index(2));
    const auto r = solve_bisection(v);
    EXPECT_NEAR(r.dilation, brute_objective(v, r.center), 1e-12 * r.dilation);
    EXPECT_EQ(r.dilation, pair_dilation(v[r.witness_a], v[r.witness_b], r.center));
    EXPECT_LE(r.lower_bound, r.dilation);
    EXPECT_LE(r.dilation - r.lower_bound, 1e-9 * r.lower_bound);
  }
}

TEST(SolveBisection, MatchesGridScan) {
  Rng rng(44);
  for (int t = 0; t < 15; ++t) {
    const auto v = random_instance(rng, 3 + rng.index(8), 2);
    const auto r = solve_bisection(v);
    const auto g = grid_scan(v, [&](const Point& x) { return brute_objective(v, x); }, 300);
    double w_min = 1e300;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) w_min = std::min(w_min, distance(v[i], v[j]));
    EXPECT_LE(r.dilation, g.value * (1 + 1e-9)) << "trial " << t;
    EXPECT_GE(r.dilation, g.value - 2 / w_min * std::sqrt(2.0) * g.spacing) << "trial " << t;
  }
}

TEST(SolveBisection, LevelSetsAreConvex) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto v = random_instance(rng, 6 + rng.index(10), 2);
    const auto r = solve_bisection(v);
    const double lambda = r.dilation * 1.05;
    std::vector<Point> inside;
    while (inside.size() < 20) {
      const Point x{r.center[0] + rng.uniform(-0.3, 0.3), r.center[1] + rng.uniform(-0.3, 0.3)};
      if (brute_objective(v, x) <= lambda) inside.push_back(x);
    }
    for (std::size_t a = 0; a + 1 < inside.size(); ++a) {
      for (double s = 0.1; s < 1; s += 0.1) {
        const Point m{(1 - s) * inside[a][0] + s * inside[a + 1][0], (1 - s) * inside[a][1] + s * inside[a + 1][1]};
        EXPECT_LE(brute_objective(v, m), lambda + 1e-10);
      }
    }
  }
}

TEST(SolveBisection, TighterToleranceNeverWorse) {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const auto v = random_instance(rng, 5 + rng.index(15), 2);
    QcpConfig loose;
    loose.eps_opt = 1e-4;
    const auto a = solve_bisection(v, loose);
    const auto b = solve_bisection(v);
    EXPECT_LE(b.dilation, a.dilation * (1 + loose.eps_opt));
  }
}

TEST(SolveBisection, RejectsBadInput) {
  EXPECT_THROW(solve_bisection(PointSet::from_points({Point{0, 0}})), Error);
  QcpConfig cfg;
  cfg.base_case_size = 3;
  EXPECT_THROW(solve_bisection(unit_square(), cfg), Error);
  cfg = {};
  cfg.eps_opt = 0;
  EXPECT_THROW(solve_chan(unit_square(), cfg), Error);
}

TEST(SolveChan, EquilateralTriangle) {
  const auto r = solve_chan(equilateral());
  EXPECT_NEAR(r.dilation, 2 / kSqrt3, 1e-6);
  EXPECT_EQ(r.method, Method::chan);
}

TEST(SolveChan, SmallInputsShareTheBisectionPath) {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto v = random_instance(rng, 2 + rng.index(8), 2);
    const auto a = solve_bisection(v), b = solve_chan(v);
    EXPECT_EQ(a.dilation, b.dilation);
    EXPECT_TRUE(a.center == b.center);
  }
}

TEST(SolveChan, MatchesBisection) {
  Rng rng(71);
  const InstanceKind kinds[] = {InstanceKind::uniform, InstanceKind::clustered, InstanceKind::collinear,
                                InstanceKind::annular};
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 10 + rng.index(55), d = 2 + rng.index(2);
    const auto v = generate(kinds[t % 4], n, d, rng.next());
    QcpConfig cfg;
    cfg.rng_seed = rng.next();
    const auto c = solve_chan(v, cfg);
    const auto b = solve_bisection(v);
    EXPECT_NEAR(c.dilation, b.dilation, 1e-6 * b.dilation) << "trial " << t;
    EXPECT_FALSE(c.fallback);
    EXPECT_GT(c.decision_calls, 0u);
    EXPECT_EQ(c.seed, cfg.rng_seed);
  }
}

TEST(SolveChan, IncumbentNeverDecreases) {
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto v = generate(InstanceKind::uniform, 200 + rng.index(300), 2, rng.next());
    const auto c = solve_chan(v);
    ASSERT_FALSE(c.incumbent_trace.empty());
    for (std::size_t k = 1; k < c.incumbent_trace.size(); ++k)
      EXPECT_GE(c.incumbent_trace[k], c.incumbent_trace[k - 1] * (1 - 1e-8));
    EXPECT_LE(c.incumbent_trace.back(), c.dilation * (1 + 1e-12));
  }
}

TEST(SolveChan, DeterministicPerSeed) {
  const auto v = generate(InstanceKind::clustered, 300, 2, 4);
  QcpConfig cfg;
  cfg.rng_seed = 99;
  const auto a = solve_chan(v, cfg), b = solve_chan(v, cfg);
  EXPECT_EQ(a.dilation, b.dilation);
  EXPECT_TRUE(a.center == b.center);
  EXPECT_EQ(a.decision_work, b.decision_work);
  cfg.rng_seed = 100;
  const auto c = solve_chan(v, cfg);
  EXPECT_NEAR(a.dilation, c.dilation, 1e-8 * a.dilation);
}

TEST(SolveChan, PassCapFallsBackToBisection) {
  Rng rng(17);
  int fallbacks = 0;
  for (int t = 0; t < 20 && fallbacks == 0; ++t) {
    const auto v = generate(InstanceKind::uniform, 60, 2, rng.next());
    QcpConfig cfg;
    cfg.pass_cap = 1;
    const auto c = solve_chan(v, cfg);
    if (!c.fallback) continue;
    ++fallbacks;
    const auto b = solve_bisection(v);
    EXPECT_EQ(c.dilation, b.dilation);
    EXPECT_EQ(c.method, Method::chan);
  }
  EXPECT_GT(fallbacks, 0);
}
