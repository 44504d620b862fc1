#include "minstar/ellipse.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "minstar/error.hpp"
#include "minstar/polynomial.hpp"

namespace minstar {

Ellipse::Ellipse(Point focus_a, Point focus_b, double level)
    : focus_a_(std::move(focus_a)), focus_b_(std::move(focus_b)), level_(level) {
  if (focus_a_.dim() != focus_b_.dim()) throw Error(ErrorKind::input, "dimension mismatch");
  if (!(level_ >= 1.0)) throw Error(ErrorKind::empty_level_set, "dilation level below 1");
  focal_distance_ = distance(focus_a_, focus_b_);
  if (focal_distance_ == 0.0) throw Error(ErrorKind::input, "coincident foci");
  sum_bound_ = level_ * focal_distance_;
  semi_minor_ = 0.5 * focal_distance_ * std::sqrt(level_ * level_ - 1.0);
}

Point Ellipse::center() const {
  std::vector<double> m(focus_a_.dim());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = 0.5 * (focus_a_[k] + focus_b_[k]);
  return Point(std::move(m));
}

Ellipse ellipse_from_pair(Coords v_i, Coords v_j, double level) {
  return Ellipse(Point(v_i), Point(v_j), level);
}

bool ellipse_contains(const Ellipse& e, Coords p, double rel_tol) {
  return distance(p, e.focus_a()) + distance(p, e.focus_b()) <= e.sum_bound() * (1.0 + rel_tol);
}

Conic ellipse_to_conic(const Ellipse& e) {
  if (e.focus_a().dim() != 2) throw Error(ErrorKind::unsupported_dimension, "conics are planar");
  const double A = e.semi_major();
  const double B = e.semi_minor();
  if (!(B > 0.0)) throw Error(ErrorKind::degenerate, "level-1 ellipse is a segment");
  const double ux = (e.focus_b()[0] - e.focus_a()[0]) / e.focal_distance();
  const double uy = (e.focus_b()[1] - e.focus_a()[1]) / e.focal_distance();
  const double ia = 1.0 / (A * A), ib = 1.0 / (B * B);
  const double p = ux * ux * ia + uy * uy * ib;
  const double q = ux * uy * (ia - ib);
  const double r = uy * uy * ia + ux * ux * ib;
  const double mx = 0.5 * (e.focus_a()[0] + e.focus_b()[0]);
  const double my = 0.5 * (e.focus_a()[1] + e.focus_b()[1]);
  Conic c;
  c.a = p;
  c.b = 2 * q;
  c.c = r;
  c.d = -2 * p * mx - 2 * q * my;
  c.e = -2 * q * mx - 2 * r * my;
  c.f = p * mx * mx + 2 * q * mx * my + r * my * my - 1.0;
  return c;
}

namespace {

using Mat3 = Eigen::Matrix3d;

Mat3 to_matrix(const Conic& c) {
  Mat3 m;
  m << c.a, c.b / 2, c.d / 2, c.b / 2, c.c, c.e / 2, c.d / 2, c.e / 2, c.f;
  return m;
}

Conic from_matrix(const Mat3& m) {
  Conic c{m(0, 0), 2 * m(0, 1), m(1, 1), 2 * m(0, 2), 2 * m(1, 2), m(2, 2)};
  const double s = std::max({std::abs(c.a), std::abs(c.b), std::abs(c.c), std::abs(c.d),
                             std::abs(c.e), std::abs(c.f)});
  if (s > 0) {
    c.a /= s; c.b /= s; c.c /= s; c.d /= s; c.e /= s; c.f /= s;
  }
  return c;
}

// Center and rough radius of an ellipse-like conic, if its quadratic part is definite.
bool conic_frame(const Conic& c, double& cx, double& cy, double& radius) {
  const double det = 4 * c.a * c.c - c.b * c.b;
  if (!(std::abs(det) > 1e-300)) return false;
  cx = (-2 * c.c * c.d + c.b * c.e) / det;
  cy = (-2 * c.a * c.e + c.b * c.d) / det;
  const double value = c(cx, cy);
  Eigen::Matrix2d q;
  q << c.a, c.b / 2, c.b / 2, c.c;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
  const double lmin = std::min(std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[1]));
  if (!(lmin > 0)) return false;
  radius = std::sqrt(std::abs(value) / lmin);
  return std::isfinite(radius) && radius > 0;
}

// Polishes (x, y) toward a common zero of both conics.
void newton_polish(const Conic& c1, const Conic& c2, double& x, double& y) {
  for (int it = 0; it < 8; ++it) {
    const double f1 = c1(x, y), f2 = c2(x, y);
    const auto g1 = c1.gradient(x, y), g2 = c2.gradient(x, y);
    const double det = g1[0] * g2[1] - g1[1] * g2[0];
    const double gscale = std::hypot(g1[0], g1[1]) * std::hypot(g2[0], g2[1]);
    if (!(std::abs(det) > 1e-12 * gscale)) return;  // tangential: Newton is unreliable
    const double dx = (f1 * g2[1] - f2 * g1[1]) / det;
    const double dy = (g1[0] * f2 - g2[0] * f1) / det;
    x -= dx;
    y -= dy;
    if (std::abs(dx) + std::abs(dy) < 1e-16) return;
  }
}

// Polynomial product, ascending coefficients.
std::vector<double> mul(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

std::vector<double> sub(std::vector<double> p, const std::vector<double>& q) {
  if (p.size() < q.size()) p.resize(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) p[i] -= q[i];
  return p;
}

}  // namespace

ConicIntersection conic_intersections(const Conic& in1, const Conic& in2) {
  // Work in a frame centred between the two conics, scaled to unit size and
  // rotated by a fixed irrational angle so that no two crossings share an
  // abscissa in typical axis-aligned inputs.
  double x0 = 0, y0 = 0, s = 1;
  double cx1, cy1, r1, cx2, cy2, r2;
  if (conic_frame(in1, cx1, cy1, r1) && conic_frame(in2, cx2, cy2, r2)) {
    x0 = 0.5 * (cx1 + cx2);
    y0 = 0.5 * (cy1 + cy2);
    s = std::max(r1, r2);
  }
  const double phi = 0.4636476090008061;  // atan(1/2)
  const double cs = std::cos(phi), sn = std::sin(phi);
  Mat3 t;
  t << s * cs, -s * sn, x0, s * sn, s * cs, y0, 0, 0, 1;
  const Conic c1 = from_matrix(t.transpose() * to_matrix(in1) * t);
  const Conic c2 = from_matrix(t.transpose() * to_matrix(in2) * t);

  // Each conic as a quadratic in Y: alpha Y^2 + beta(X) Y + gamma(X).
  const double al1 = c1.c, al2 = c2.c;
  const std::vector<double> be1{c1.e, c1.b}, be2{c2.e, c2.b};
  const std::vector<double> ga1{c1.f, c1.d, c1.a}, ga2{c2.f, c2.d, c2.a};
  std::vector<double> u(3), v(2);
  for (int k = 0; k < 3; ++k) u[k] = al1 * ga2[k] - al2 * ga1[k];
  for (int k = 0; k < 2; ++k) v[k] = al1 * be2[k] - al2 * be1[k];
  const std::vector<double> w = sub(mul(be1, ga2), mul(be2, ga1));
  const std::vector<double> uu = mul(u, u), vw = mul(v, w);
  const std::vector<double> res = sub(uu, vw);

  ConicIntersection out;
  double rmax = 0, tmax = 0;
  for (std::size_t k = 0; k < res.size(); ++k) {
    rmax = std::max(rmax, std::abs(res[k]));
    tmax = std::max({tmax, std::abs(uu[k]), k < vw.size() ? std::abs(vw[k]) : 0.0});
  }
  if (rmax <= 1e-12 * tmax || tmax == 0.0) {
    out.degenerate = true;
    return out;
  }

  std::vector<std::array<double, 2>> local;
  auto accept = [&](double x, double y) {
    newton_polish(c1, c2, x, y);
    const double tol = 1e-8;
    if (std::abs(c1(x, y)) > tol || std::abs(c2(x, y)) > tol) return;
    for (const auto& p : local) {
      if (std::hypot(p[0] - x, p[1] - y) <= kRootMergeTolerance) return;
    }
    local.push_back({x, y});
  };

  for (double x : real_roots(res, kRootMergeTolerance)) {
    const double vx = poly_eval(v, x), ux = poly_eval(u, x);
    const double vscale = std::abs(v[0]) + std::abs(v[1] * x) + 1e-300;
    if (std::abs(vx) > 1e-9 * vscale && std::abs(al1) + std::abs(al2) > 0) {
      accept(x, -ux / vx);
      continue;
    }
    // Shared abscissa (or vertical tangency): try both roots of either quadratic.
    for (int which = 0; which < 2; ++which) {
      const Conic& c = which == 0 ? c1 : c2;
      const double a = c.c, b = c.b * x + c.e, cc = c.a * x * x + c.d * x + c.f;
      if (a == 0) continue;
      double disc = b * b - 4 * a * cc;
      if (disc < 0) {
        if (disc < -1e-10 * (b * b + std::abs(4 * a * cc))) continue;
        disc = 0;
      }
      const double sq = std::sqrt(disc);
      accept(x, (-b + sq) / (2 * a));
      accept(x, (-b - sq) / (2 * a));
    }
  }

  for (const auto& p : local) {
    const Eigen::Vector3d g = t * Eigen::Vector3d(p[0], p[1], 1.0);
    out.points.push_back(Point{g[0], g[1]});
  }
  return out;
}

}  // namespace minstar
