#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "minstar/error.hpp"
#include "minstar/io.hpp"
#include "minstar/random.hpp"
#include "minstar/vertex_opt.hpp"

using namespace minstar;

namespace {

constexpr double kPi = std::numbers::pi;

// All-pairs test, independent of the ring: f_ij(p) < level for every pair.
bool inside_all(const std::vector<Ellipse>& es, Coords p) {
  return std::all_of(es.begin(), es.end(), [&](const Ellipse& e) {
    return distance(e.focus_a(), p) + distance(p, e.focus_b()) < e.sum_bound();
  });
}

// Signed margin of p relative to the tightest ellipse, in units of its sum bound.
double margin(const std::vector<Ellipse>& es, Coords p) {
  double m = 1e300;
  for (const auto& e : es)
    m = std::min(m, (e.sum_bound() - distance(e.focus_a(), p) - distance(p, e.focus_b())) / e.sum_bound());
  return m;
}

std::vector<Ellipse> random_ellipses_around(Rng& rng, const Point& r, std::size_t count) {
  std::vector<Ellipse> out;
  while (out.size() < count) {
    const Point a{r[0] + rng.uniform(-2, 2), r[1] + rng.uniform(-2, 2)};
    const Point b{r[0] + rng.uniform(-2, 2), r[1] + rng.uniform(-2, 2)};
    const double w = distance(a, b);
    if (w < 1e-3) continue;
    const double through_r = (distance(a, r) + distance(r, b)) / w;
    out.emplace_back(a, b, through_r * rng.uniform(1.02, 2.0));
  }
  return out;
}

void expect_tiling(const ArcRing& ring) {
  const auto& arcs = ring.arcs();
  ASSERT_FALSE(arcs.empty());
  EXPECT_EQ(arcs.front().theta_lo, 0.0);
  EXPECT_EQ(arcs.back().theta_hi, 2 * kPi);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    EXPECT_LE(arcs[i].theta_lo, arcs[i].theta_hi);
    if (i > 0) EXPECT_EQ(arcs[i].theta_lo, arcs[i - 1].theta_hi);
  }
}

PointSet square_corners() {
  return PointSet::from_points({Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}});
}

}  // namespace

TEST(AnnulusIndex, Examples) {
  EXPECT_EQ(annulus_index(Point{5, 0}, Point{0, 0}, 2), 2);
  EXPECT_EQ(annulus_index(Point{0, 1}, Point{0, 0}, 2), 0);
  EXPECT_EQ(annulus_index(Point{0.3, 0}, Point{0, 0}, 2), -2);
  EXPECT_EQ(annulus_index(Point{4, 0}, Point{0, 0}, 2), 2);
  EXPECT_EQ(annulus_index(Point{3.999999, 0}, Point{0, 0}, 2), 1);
  EXPECT_EQ(annulus_index(Point{1, 1}, Point{1, 0}, 1.5), 0);
}

TEST(AnnulusIndex, Errors) {
  try {
    annulus_index(Point{1, 1}, Point{1, 1}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
  EXPECT_THROW(annulus_index(Point{1, 1}, Point{0, 0}, 1.0), Error);
}

TEST(AnnulusIndex, AgreesWithPowers) {
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const double rho = rng.uniform(1.01, 4);
    const double d = std::exp(rng.uniform(-10, 10));
    const long k = annulus_index(Point{d, 0}, Point{0, 0}, rho);
    EXPECT_LE(std::pow(rho, k), d * (1 + 1e-12));
    EXPECT_GT(std::pow(rho, k + 1), d * (1 - 1e-12));
  }
}

TEST(RadialBoundary, AxisVertices) {
  const Ellipse e(Point{-1, 0}, Point{1, 0}, 2.0);
  EXPECT_NEAR(radial_boundary(e, Point{0, 0}, 0), 2.0, 1e-12);
  EXPECT_NEAR(radial_boundary(e, Point{0, 0}, kPi / 2), std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(radial_boundary(e, Point{0, 0}, kPi), 2.0, 1e-12);
}

TEST(RadialBoundary, BoundaryResidual) {
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const Point r{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto es = random_ellipses_around(rng, r, 1);
    const double theta = rng.uniform(0, 2 * kPi);
    const double rad = radial_boundary(es[0], r, theta);
    ASSERT_GT(rad, 0);
    const Point q{r[0] + rad * std::cos(theta), r[1] + rad * std::sin(theta)};
    const double sum = distance(es[0].focus_a(), q) + distance(q, es[0].focus_b());
    EXPECT_NEAR(sum, es[0].sum_bound(), 1e-9 * es[0].sum_bound());
  }
}

TEST(RadialBoundary, Errors) {
  const Ellipse e(Point{-1, 0}, Point{1, 0}, 2.0);
  try {
    radial_boundary(e, Point{5, 0}, 0);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::interiority);
  }
  EXPECT_THROW(radial_boundary(e, Point{2, 0}, 0), Error);  // on the boundary
  const Ellipse e3(Point{-1, 0, 0}, Point{1, 0, 0}, 2.0);
  EXPECT_THROW(radial_boundary(e3, Point{0, 0, 0}, 0), Error);
}

TEST(ArcRing, SingleEllipse) {
  const auto ring = build_arc_ring({Ellipse(Point{-1, 0}, Point{1, 0}, 2.0)}, Point{0.3, 0.2});
  ASSERT_EQ(ring.arcs().size(), 1u);
  expect_tiling(ring);
}

TEST(ArcRing, MirroredNearCircles) {
  // Two mirror-image ellipses about x = 0 cross on the y axis.
  const Ellipse left(Point{-0.5, -0.1}, Point{-0.5, 0.1}, 8.0);
  const Ellipse right(Point{0.5, -0.1}, Point{0.5, 0.1}, 8.0);
  const auto ring = build_arc_ring({left, right}, Point{0, 0});
  expect_tiling(ring);
  ASSERT_EQ(ring.arcs().size(), 3u);
  EXPECT_EQ(ring.arcs()[0].ellipse_id, 0u);
  EXPECT_EQ(ring.arcs()[1].ellipse_id, 1u);
  EXPECT_EQ(ring.arcs()[2].ellipse_id, 0u);
  EXPECT_NEAR(ring.arcs()[0].theta_hi, kPi / 2, 1e-9);
  EXPECT_NEAR(ring.arcs()[1].theta_hi, 3 * kPi / 2, 1e-9);
}

TEST(ArcRing, EnvelopeMatchesDirectMinimum) {
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const Point r{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto es = random_ellipses_around(rng, r, 64);
    const auto ring = build_arc_ring(es, r);
    expect_tiling(ring);
    EXPECT_LE(ring.arcs().size(), 64u * es.size());
    double worst = 0;
    for (int s = 0; s < 10000; ++s) {
      const double theta = 2 * kPi * s / 10000.0;
      double direct = 1e300;
      for (const auto& e : es) direct = std::min(direct, radial_boundary(e, r, theta));
      worst = std::max(worst, std::abs(ring.radius_at(theta) - direct) / direct);
    }
    EXPECT_LE(worst, 1e-9) << "instance " << t;
  }
}

TEST(ArcRing, ContainsMatchesAllEllipses) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const Point r{0, 0};
    const auto es = random_ellipses_around(rng, r, 64);
    const auto ring = build_arc_ring(es, r);
    EXPECT_TRUE(arc_ring_contains(ring, r));
    EXPECT_FALSE(arc_ring_contains(ring, Point{1e3, 1e3}));
    for (int s = 0; s < 10000; ++s) {
      const double theta = rng.uniform(0, 2 * kPi);
      const double rad = ring.radius_at(theta) * rng.uniform(0, 1.5);
      const Point p{rad * std::cos(theta), rad * std::sin(theta)};
      const bool got = arc_ring_contains(ring, p), want = inside_all(es, p);
      if (got != want) EXPECT_LT(std::abs(margin(es, p)), 1e-9);
      // Accepting near-boundary points is fine, rejecting interior ones is not.
      if (want) EXPECT_TRUE(got);
    }
  }
}

TEST(ArcRing, Errors) {
  EXPECT_THROW(build_arc_ring({}, Point{0, 0}), Error);
  try {
    build_arc_ring({Ellipse(Point{-1, 0}, Point{1, 0}, 2.0)}, Point{9, 9});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::interiority);
  }
}

TEST(SelectRegion, TinyInputTakesAllPairs) {
  const auto v = PointSet::from_points({Point{0, 0}, Point{1, 0}, Point{0, 1}});
  const auto r = select_region_ellipses(v, v[0], 3.0, Point{0.3, 0.3});
  EXPECT_EQ(r.pairs.size(), 3u);
  EXPECT_EQ(r.ellipses.size(), 3u);
  EXPECT_FALSE(r.fallback);
}

TEST(SelectRegion, SquareCornerKeepsWitnessPair) {
  const auto v = square_corners();
  const auto r = select_region_ellipses(v, v[0], 1 + std::sqrt(2.0), Point{0.5, 0.5});
  EXPECT_TRUE(std::find(r.pairs.begin(), r.pairs.end(), std::make_pair(std::size_t{1}, std::size_t{2})) !=
              r.pairs.end());
}

TEST(SelectRegion, IntersectionMatchesAllPairs) {
  Rng rng(6);
  const InstanceKind kinds[] = {InstanceKind::uniform, InstanceKind::clustered, InstanceKind::annular};
  int checked = 0;
  for (int t = 0; t < 12; ++t) {
    const auto v = generate(kinds[t % 3], 40 + rng.index(80), 2, rng.next());
    const auto opt = solve_chan(v);
    const std::size_t c = rng.index(v.size());
    const double level = evaluate_brute(v.without(c), v[c]).dilation;
    if (!(opt.dilation < level * (1 - 1e-9))) continue;
    const auto sel = select_region_ellipses(v, v[c], level, opt.center);
    if (sel.fallback) continue;
    ++checked;
    std::vector<Ellipse> all;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) all.push_back(ellipse_from_pair(v[i], v[j], level));
    const auto ring = build_arc_ring(sel.ellipses, opt.center);
    for (int s = 0; s < 1000; ++s) {
      const double theta = rng.uniform(0, 2 * kPi);
      const double rad = ring.radius_at(theta) * rng.uniform(0, 1.3);
      const Point p{opt.center[0] + rad * std::cos(theta), opt.center[1] + rad * std::sin(theta)};
      const bool selected = inside_all(sel.ellipses, p), everything = inside_all(all, p);
      if (selected != everything) EXPECT_LT(std::abs(margin(all, p)), 1e-9) << "instance " << t;
    }
  }
  EXPECT_GE(checked, 6);
}

TEST(SelectRegion, Errors) {
  const auto v3 = PointSet::from_points({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}});
  EXPECT_THROW(select_region_ellipses(v3, v3[0], 2.0, Point{0, 0, 0}), Error);
  EXPECT_THROW(select_region_ellipses(square_corners(), Point{0, 0}, 1.0, Point{0.5, 0.5}), Error);
}

TEST(SolveConstrained, CollinearTriple) {
  const auto v = PointSet::from_points({Point{0, 0}, Point{1, 0}, Point{2, 0}});
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto r = solve_constrained(v, {}, EvalConstants::fast(), seed);
    EXPECT_EQ(r.center_index, 1u);
    EXPECT_EQ(r.dilation, 1.0);
  }
  const auto b = solve_constrained_brute(v);
  EXPECT_EQ(b.center_index, 1u);
  EXPECT_EQ(b.dilation, 1.0);
}

TEST(SolveConstrained, SquareCorners) {
  const auto r = solve_constrained(square_corners());
  EXPECT_NEAR(r.dilation, 1 + std::sqrt(2.0), 1e-12);
  const auto b = solve_constrained_brute(square_corners());
  EXPECT_EQ(b.center_index, 0u);
  EXPECT_NEAR(b.dilation, 1 + std::sqrt(2.0), 1e-12);
}

TEST(SolveConstrained, EquilateralTriangle) {
  const auto v = PointSet::from_points({Point{0, 0}, Point{1, 0}, Point{0.5, std::sqrt(3.0) / 2}});
  EXPECT_NEAR(solve_constrained(v).dilation, 2.0, 1e-12);
  EXPECT_NEAR(solve_constrained_brute(v).dilation, 2.0, 1e-12);
}

TEST(SolveConstrained, MatchesBrute) {
  Rng rng(8);
  const InstanceKind kinds[] = {InstanceKind::uniform, InstanceKind::clustered, InstanceKind::collinear,
                                InstanceKind::annular};
  for (int t = 0; t < 60; ++t) {
    const auto v = generate(kinds[t % 4], 3 + rng.index(126), 2, rng.next());
    const auto f = solve_constrained(v, {}, EvalConstants::fast(), rng.next());
    const auto b = solve_constrained_brute(v);
    EXPECT_NEAR(f.dilation, b.dilation, 1e-9 * b.dilation) << "trial " << t;
    EXPECT_EQ(f.dilation, evaluate_brute(v.without(f.center_index), v[f.center_index]).dilation);
    EXPECT_FALSE(f.fallback);
  }
}

TEST(SolveConstrained, LoopMakesProgress) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto v = generate(InstanceKind::uniform, 300, 2, rng.next());
    const auto r = solve_constrained(v, {}, EvalConstants::fast(), rng.next());
    for (std::size_t k = 1; k < r.dilation_trace.size(); ++k)
      EXPECT_LT(r.dilation_trace[k], r.dilation_trace[k - 1] * (1 + 1e-9));
    for (std::size_t k = 1; k < r.pruned_counts.size(); ++k) EXPECT_LE(r.pruned_counts[k], r.pruned_counts[k - 1]);
    EXPECT_LE(r.loop_iterations, 8u * 9 + 8);
  }
}

TEST(SolveConstrained, DeterministicPerSeed) {
  const auto v = generate(InstanceKind::clustered, 200, 2, 3);
  const auto a = solve_constrained(v, {}, EvalConstants::fast(), 42);
  const auto b = solve_constrained(v, {}, EvalConstants::fast(), 42);
  EXPECT_EQ(a.center_index, b.center_index);
  EXPECT_EQ(a.dilation_trace, b.dilation_trace);
  EXPECT_EQ(a.seed, 42u);
}

TEST(SolveConstrained, Errors) {
  EXPECT_THROW(solve_constrained(PointSet::from_points({Point{0, 0}, Point{1, 0}})), Error);
  const auto v3 = PointSet::from_points({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}});
  try {
    solve_constrained(v3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_dimension);
  }
  const auto b = solve_constrained_brute(v3);
  EXPECT_EQ(b.center_index, 0u);
  EXPECT_NEAR(b.dilation, std::sqrt(2.0), 1e-15);
}
