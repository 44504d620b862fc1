#include "minstar/vertex_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "minstar/error.hpp"
#include "minstar/random.hpp"

namespace minstar {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kAngleMergeTolerance = 1e-12;
constexpr std::size_t kRegionPartnerCapFactor = 4;
constexpr int kClassifyDepth = 8;

void require_planar(std::size_t dim) {
  if (dim != 2) throw Error(ErrorKind::unsupported_dimension, "arc rings are planar");
}

ArcRing::Shape shape_of(const Ellipse& e) {
  require_planar(e.focus_a().dim());
  const double alpha = e.semi_major(), beta = e.semi_minor();
  if (!(beta > 0)) throw Error(ErrorKind::interiority, "ellipse has no interior");
  const double w = e.focal_distance();
  const double ux = (e.focus_b()[0] - e.focus_a()[0]) / w, uy = (e.focus_b()[1] - e.focus_a()[1]) / w;
  const double ia = 1 / (alpha * alpha), ib = 1 / (beta * beta);
  const Point m = e.center();
  return {m[0], m[1], ux * ux * ia + uy * uy * ib, ux * uy * (ia - ib), uy * uy * ia + ux * ux * ib};
}

void require_interior(const Ellipse& e, Coords r) {
  const double s = distance(e.focus_a(), r) + distance(r, e.focus_b());
  if (!(s < e.sum_bound())) throw Error(ErrorKind::interiority, "reference point not strictly inside ellipse");
}

double normalise_angle(double t) {
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0;
  return t;
}

class EnvelopeBuilder {
 public:
  EnvelopeBuilder(const std::vector<Ellipse>& ellipses, const std::vector<ArcRing::Shape>& shapes, Coords r)
      : ellipses_(ellipses), shapes_(shapes), rx_(r[0]), ry_(r[1]) {}

  std::vector<Arc> build(const std::vector<std::size_t>& ids, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return {Arc{ids[lo], 0.0, kTwoPi}};
    const std::size_t mid = lo + (hi - lo) / 2;
    return merge(build(ids, lo, mid), build(ids, mid, hi));
  }

 private:
  double radius(std::size_t id, double t) const { return shapes_[id].radius(rx_, ry_, t); }

  // Positive where ellipse b is nearer than ellipse a.
  double gap(std::size_t a, std::size_t b, double t) const { return radius(a, t) - radius(b, t); }

  const std::vector<double>& crossings(std::size_t a, std::size_t b) {
    if (cached_a_ == a && cached_b_ == b) return cached_;
    cached_a_ = a;
    cached_b_ = b;
    cached_.clear();
    const auto hit = conic_intersections(ellipse_to_conic(ellipses_[a]), ellipse_to_conic(ellipses_[b]));
    if (!hit.degenerate) {
      const double r[2] = {rx_, ry_};
      for (const Point& p : hit.points) cached_.push_back(polar_angle(r, p));
      std::sort(cached_.begin(), cached_.end());
    }
    return cached_;
  }

  void emit(std::vector<Arc>& out, std::size_t id, double t1) {
    if (!out.empty() && out.back().ellipse_id == id) {
      out.back().theta_hi = t1;
      return;
    }
    const double t0 = out.empty() ? 0.0 : out.back().theta_hi;
    if (!out.empty() && t1 - t0 < kAngleMergeTolerance) {
      out.back().theta_hi = t1;
      return;
    }
    out.push_back({id, t0, t1});
  }

  // Emits the nearer of a and b over [t0, t1], assumed free of unreported crossings
  // unless the quarter-point samples disagree.
  void classify(std::vector<Arc>& out, std::size_t a, std::size_t b, double t0, double t1, int depth) {
    const double q[3] = {t0 + 0.25 * (t1 - t0), t0 + 0.5 * (t1 - t0), t0 + 0.75 * (t1 - t0)};
    const double g[3] = {gap(a, b, q[0]), gap(a, b, q[1]), gap(a, b, q[2])};
    if (depth < kClassifyDepth) {
      for (int k = 0; k < 2; ++k) {
        if ((g[k] < 0 && g[k + 1] > 0) || (g[k] > 0 && g[k + 1] < 0)) {
          double lo = q[k], hi = q[k + 1];
          const bool lo_negative = g[k] < 0;
          for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
            const double m = 0.5 * (lo + hi);
            if ((gap(a, b, m) < 0) == lo_negative) lo = m;
            else hi = m;
          }
          const double root = 0.5 * (lo + hi);
          classify(out, a, b, t0, root, depth + 1);
          classify(out, a, b, root, t1, depth + 1);
          return;
        }
      }
    }
    const double g_mid = g[1];
    std::size_t nearer;
    if (g_mid < 0) nearer = a;
    else if (g_mid > 0) nearer = b;
    else nearer = std::min(a, b);
    emit(out, nearer, t1);
  }

  std::vector<Arc> merge(const std::vector<Arc>& s1, const std::vector<Arc>& s2) {
    std::vector<Arc> out;
    out.reserve(s1.size() + s2.size());
    std::size_t i = 0, j = 0;
    double t = 0;
    while (i < s1.size() && j < s2.size()) {
      const std::size_t a = s1[i].ellipse_id, b = s2[j].ellipse_id;
      const double end = std::min(s1[i].theta_hi, s2[j].theta_hi);
      if (end > t) {
        double from = t;
        for (double c : crossings(std::min(a, b), std::max(a, b))) {
          if (c > from + kAngleMergeTolerance && c < end - kAngleMergeTolerance) {
            classify(out, a, b, from, c, 0);
            from = c;
          }
        }
        classify(out, a, b, from, end, 0);
        t = end;
      }
      if (s1[i].theta_hi <= end) ++i;
      if (s2[j].theta_hi <= end) ++j;
    }
    out.front().theta_lo = 0;
    out.back().theta_hi = kTwoPi;
    return out;
  }

  const std::vector<Ellipse>& ellipses_;
  const std::vector<ArcRing::Shape>& shapes_;
  double rx_, ry_;
  std::size_t cached_a_ = static_cast<std::size_t>(-1), cached_b_ = static_cast<std::size_t>(-1);
  std::vector<double> cached_;
};

}  // namespace

long annulus_index(Coords p, Coords center, double rho) {
  if (!(rho > 1)) throw Error(ErrorKind::input, "annulus ratio must exceed 1");
  const double d = distance(p, center);
  if (d == 0) throw Error(ErrorKind::degenerate, "annulus index undefined at the center");
  auto k = static_cast<long>(std::floor(std::log(d) / std::log(rho)));
  while (std::pow(rho, static_cast<double>(k)) > d) --k;
  while (std::pow(rho, static_cast<double>(k + 1)) <= d) ++k;
  return k;
}

double ArcRing::Shape::radius(double rx, double ry, double theta) const {
  const double ux = std::cos(theta), uy = std::sin(theta);
  const double dx = rx - mx, dy = ry - my;
  const double a = q11 * ux * ux + 2 * q12 * ux * uy + q22 * uy * uy;
  const double b = q11 * dx * ux + q12 * (dx * uy + dy * ux) + q22 * dy * uy;
  const double c = q11 * dx * dx + 2 * q12 * dx * dy + q22 * dy * dy - 1;
  const double root = std::sqrt(std::max(0.0, b * b - a * c));
  return b <= 0 ? (root - b) / a : -c / (b + root);
}

double radial_boundary(const Ellipse& e, Coords r, double theta) {
  require_planar(r.size());
  const auto shape = shape_of(e);
  require_interior(e, r);
  return shape.radius(r[0], r[1], theta);
}

double polar_angle(Coords r, Coords p) { return normalise_angle(std::atan2(p[1] - r[1], p[0] - r[0])); }

ArcRing::ArcRing(Point ref, std::vector<Ellipse> ellipses, std::vector<Arc> arcs)
    : ref_(std::move(ref)), ellipses_(std::move(ellipses)), arcs_(std::move(arcs)) {
  shapes_.reserve(ellipses_.size());
  for (const auto& e : ellipses_) shapes_.push_back(shape_of(e));
}

std::size_t ArcRing::arc_at(double theta) const {
  auto it = std::upper_bound(arcs_.begin(), arcs_.end(), theta,
                             [](double t, const Arc& a) { return t < a.theta_lo; });
  if (it == arcs_.begin()) return 0;
  return static_cast<std::size_t>(it - arcs_.begin()) - 1;
}

double ArcRing::radius_at(double theta) const {
  return shapes_[arcs_[arc_at(theta)].ellipse_id].radius(ref_[0], ref_[1], theta);
}

ArcRing build_arc_ring(std::vector<Ellipse> ellipses, Point r) {
  if (ellipses.empty()) throw Error(ErrorKind::input, "no ellipses");
  require_planar(r.dim());
  std::vector<ArcRing::Shape> shapes;
  shapes.reserve(ellipses.size());
  for (const auto& e : ellipses) {
    shapes.push_back(shape_of(e));
    require_interior(e, r);
  }

  // Ellipse e stays within distance semi_major + |m r| of r, and every boundary
  // point is at least (sum_bound - |ra| - |rb|) / 2 away from r.
  std::vector<double> nearest(ellipses.size());
  double reach = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ellipses.size(); ++i) {
    const auto& e = ellipses[i];
    nearest[i] = 0.5 * (e.sum_bound() - distance(e.focus_a(), r) - distance(r, e.focus_b()));
    reach = std::min(reach, e.semi_major() + distance(e.center(), r));
  }
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < ellipses.size(); ++i) {
    if (nearest[i] <= reach * (1 + 1e-12)) ids.push_back(i);
  }

  EnvelopeBuilder builder(ellipses, shapes, r);
  auto arcs = builder.build(ids, 0, ids.size());
  return ArcRing(std::move(r), std::move(ellipses), std::move(arcs));
}

bool arc_ring_contains(const ArcRing& ring, Coords p) {
  require_planar(p.size());
  const double d = distance(ring.ref(), p);
  if (d == 0) return true;
  return d <= ring.radius_at(polar_angle(ring.ref(), p)) * (1 + kMembershipTolerance);
}

double region_rho(const EvalConstants& consts) {
  const double g = consts.gamma_threshold;
  return std::sqrt((g + 1) / (g - 1)) + 0.1;
}

RegionEllipses select_region_ellipses(const PointSet& leaves, Coords center, double dilation, Coords optimum,
                                      const EvalConstants& consts) {
  require_planar(leaves.dim());
  consts.validate();
  if (!(dilation > 1)) throw Error(ErrorKind::input, "region level must exceed 1");
  const std::size_t n = leaves.size();
  RegionEllipses out;
  if (n < 2) return out;
  const std::size_t cap = kRegionPartnerCapFactor * consts.knn_k;
  const bool high = dilation >= consts.gamma_threshold;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  auto add = [&](std::size_t i, std::size_t j) {
    if (i != j) pairs.emplace_back(std::min(i, j), std::max(i, j));
  };

  const NeighborTable knn = all_knn(leaves, consts.knn_k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : knn[i]) add(i, j);

  const std::vector<std::size_t> order = distance_order(leaves, optimum);
  const std::size_t window = 2 * consts.rank_window_l;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n && b - a <= window; ++b) add(order[a], order[b]);

  // Partners drawn from a neighbourhood of the optimum, nearest first, limited to the cap.
  auto partners = [&](auto&& keep) {
    std::vector<std::size_t> out_idx;
    for (std::size_t b : order)
      if (keep(b)) out_idx.push_back(b);
    if (out_idx.size() > cap) {
      out.truncated += (out_idx.size() - cap);
      if (!high) out.fallback = true;
      out_idx.resize(cap);
    }
    return out_idx;
  };

  const double x = distance(center, optimum);
  if (x > 0) {
    const double rho = region_rho(consts);
    const long shell = annulus_index(center, optimum, rho);
    const auto in_shells = partners([&](std::size_t b) {
      if (distance(leaves[b], optimum) == 0) return false;
      const long k = annulus_index(leaves[b], optimum, rho);
      return k == shell || k == shell + 1;
    });
    for (std::size_t a = 0; a < n; ++a) {
      const double da = distance(leaves[a], optimum);
      if (da < x / rho || da > x * rho) continue;
      for (std::size_t b : in_shells) add(a, b);
    }
    const auto inner = partners([&](std::size_t b) { return distance(leaves[b], optimum) < x; });
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b : inner) add(a, b);
  }

  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  out.ellipses.reserve(pairs.size());
  for (const auto& [i, j] : pairs) out.ellipses.push_back(ellipse_from_pair(leaves[i], leaves[j], dilation));
  out.pairs = std::move(pairs);
  return out;
}

namespace {

double vertex_dilation(const PointSet& leaves, std::size_t c, const EvalConstants& consts) {
  return evaluate_fast(leaves.without(c), leaves[c], consts).dilation;
}

void require_constrained_input(const PointSet& leaves) {
  if (leaves.size() < 3) throw Error(ErrorKind::input, "need at least three points");
  require_planar(leaves.dim());
}

}  // namespace

ConstrainedResult solve_constrained(const PointSet& leaves, const QcpConfig& cfg, const EvalConstants& consts,
                                    std::uint64_t rng_seed) {
  require_constrained_input(leaves);
  consts.validate();
  const std::size_t n = leaves.size();
  ConstrainedResult out;
  out.seed = rng_seed;
  Rng rng(rng_seed);

  std::vector<std::size_t> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  std::size_t best = n;
  double best_dilation = std::numeric_limits<double>::infinity();
  auto offer = [&](std::size_t c, double dil) {
    if (dil < best_dilation || (dil == best_dilation && c < best)) {
      best = c;
      best_dilation = dil;
    }
  };
  // Decides every survivor directly and empties the candidate set.
  auto finish_directly = [&] {
    for (std::size_t p : alive) offer(p, vertex_dilation(leaves, p, consts));
    alive.clear();
  };

  const auto log2n = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
  const std::size_t cap = 8 * log2n + 8;
  bool have_optimum = false;
  OptResult optimum;

  while (!alive.empty()) {
    if (out.loop_iterations == cap) {
      out.fallback = true;
      finish_directly();
      break;
    }
    ++out.loop_iterations;
    const std::size_t pick = rng.index(alive.size());
    const std::size_t c = alive[pick];
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pick));
    const double dil = vertex_dilation(leaves, c, consts);
    out.dilation_trace.push_back(dil);
    offer(c, dil);
    if (alive.empty()) break;

    if (!have_optimum) {
      optimum = solve_chan(leaves, cfg);
      out.unconstrained_center = optimum.center;
      out.unconstrained_dilation = optimum.dilation;
      have_optimum = true;
    }
    if (optimum.dilation >= best_dilation * (1 - cfg.eps_opt)) {
      // The optimum is not safely interior, so no arc ring can be anchored there.
      ++out.brute_membership_rounds;
      finish_directly();
      break;
    }

    const auto region = select_region_ellipses(leaves, leaves[best], best_dilation, optimum.center, consts);
    out.truncated_pairs += region.truncated;
    if (region.fallback) {
      ++out.brute_membership_rounds;
      finish_directly();
      break;
    }
    try {
      const ArcRing ring = build_arc_ring(region.ellipses, optimum.center);
      std::erase_if(alive, [&](std::size_t p) { return !arc_ring_contains(ring, leaves[p]); });
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::interiority) throw;
      ++out.brute_membership_rounds;
      finish_directly();
      break;
    }
    out.pruned_counts.push_back(alive.size());
  }

  out.center_index = best;
  out.dilation = best_dilation;
  return out;
}

ConstrainedResult solve_constrained_brute(const PointSet& leaves) {
  if (leaves.size() < 3) throw Error(ErrorKind::input, "need at least three points");
  ConstrainedResult out;
  out.dilation = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < leaves.size(); ++c) {
    const double dil = evaluate_brute(leaves.without(c), leaves[c]).dilation;
    out.dilation_trace.push_back(dil);
    if (dil < out.dilation) {
      out.dilation = dil;
      out.center_index = c;
    }
  }
  out.loop_iterations = leaves.size();
  return out;
}

}  // namespace minstar
