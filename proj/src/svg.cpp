#include "minstar/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "minstar/error.hpp"
#include "minstar/vertex_opt.hpp"

namespace minstar {

namespace {

constexpr double kCanvas = 800;
constexpr double kMargin = 30;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Frame {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  void cover(double x, double y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  }
  double scale() const {
    const double span = std::max({x1 - x0, y1 - y0, 1e-12});
    return (kCanvas - 2 * kMargin) / span;
  }
  double px(double x) const { return kMargin + (x - x0) * scale(); }
  double py(double y) const { return kCanvas - kMargin - (y - y0) * scale(); }
};

}  // namespace

Rendering render_star(const PointSet& leaves, const Point& center, const RenderOptions& opts) {
  if (leaves.dim() != 2 || center.dim() != 2) throw Error(ErrorKind::unsupported_dimension, "rendering is planar");
  Rendering out;
  std::vector<Ellipse> drawn;

  if (opts.region_level) {
    const double level = *opts.region_level;
    const OptResult opt = solve_chan(leaves, opts.qcp);
    if (!(level > 1) || opt.dilation >= level) {
      out.warning = "region is empty at level " + num(level) + " (optimum " + num(opt.dilation) + ")";
    } else {
      auto sel = select_region_ellipses(leaves, center, level, opt.center, opts.consts);
      const ArcRing ring = build_arc_ring(sel.ellipses, opt.center);
      out.arcs = ring.arcs().size();
      out.region_ref = opt.center;
      for (std::size_t s = 0; s < opts.envelope_samples; ++s) {
        const double t = 2 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(opts.envelope_samples);
        const double r = ring.radius_at(t);
        out.envelope.push_back(Point{opt.center[0] + r * std::cos(t), opt.center[1] + r * std::sin(t)});
      }
      if (sel.ellipses.size() <= opts.ellipse_draw_limit) {
        drawn = ring.ellipses();
      } else {
        std::vector<std::size_t> ids;
        for (const Arc& a : ring.arcs()) ids.push_back(a.ellipse_id);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (std::size_t id : ids) drawn.push_back(ring.ellipses()[id]);
      }
    }
  }

  Frame f;
  for (std::size_t i = 0; i < leaves.size(); ++i) f.cover(leaves[i][0], leaves[i][1]);
  f.cover(center[0], center[1]);
  for (const Point& p : out.envelope) f.cover(p[0], p[1]);

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kCanvas) + "\" height=\"" + num(kCanvas) +
       "\" viewBox=\"0 0 " + num(kCanvas) + " " + num(kCanvas) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  s += "<g class=\"ellipses\" fill=\"none\" stroke=\"#9ab\" stroke-width=\"0.6\">\n";
  for (const Ellipse& e : drawn) {
    const Point m = e.center();
    const double angle =
        std::atan2(e.focus_b()[1] - e.focus_a()[1], e.focus_b()[0] - e.focus_a()[0]) * 180 / std::numbers::pi;
    s += "<ellipse cx=\"" + num(f.px(m[0])) + "\" cy=\"" + num(f.py(m[1])) + "\" rx=\"" +
         num(e.semi_major() * f.scale()) + "\" ry=\"" + num(e.semi_minor() * f.scale()) + "\" transform=\"rotate(" +
         num(-angle) + " " + num(f.px(m[0])) + " " + num(f.py(m[1])) + ")\"/>\n";
  }
  s += "</g>\n";
  out.ellipses_drawn = drawn.size();

  if (!out.envelope.empty()) {
    s += "<polygon class=\"envelope\" fill=\"#fd8\" fill-opacity=\"0.4\" stroke=\"#c80\" stroke-width=\"1.5\" points=\"";
    for (const Point& p : out.envelope) s += num(f.px(p[0])) + "," + num(f.py(p[1])) + " ";
    s += "\"/>\n";
  }

  s += "<g class=\"edges\" stroke=\"#333\" stroke-width=\"1\">\n";
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (distance(leaves[i], center) == 0) continue;
    s += "<line x1=\"" + num(f.px(center[0])) + "\" y1=\"" + num(f.py(center[1])) + "\" x2=\"" +
         num(f.px(leaves[i][0])) + "\" y2=\"" + num(f.py(leaves[i][1])) + "\"/>\n";
    ++out.edges;
  }
  s += "</g>\n";

  s += "<g class=\"markers\">\n";
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    s += "<circle cx=\"" + num(f.px(leaves[i][0])) + "\" cy=\"" + num(f.py(leaves[i][1])) +
         "\" r=\"3\" fill=\"#27c\"/>\n";
    ++out.markers;
  }
  s += "<circle class=\"center\" cx=\"" + num(f.px(center[0])) + "\" cy=\"" + num(f.py(center[1])) +
       "\" r=\"5\" fill=\"#d22\"/>\n";
  ++out.markers;
  s += "</g>\n</svg>\n";
  out.svg = std::move(s);
  return out;
}

}  // namespace minstar
