#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minstar/center_opt.hpp"
#include "minstar/point.hpp"
#include "minstar/star_eval.hpp"

namespace minstar {

struct RenderOptions {
  /// Draw the region of centers beating this dilation, bounded by its arc ring.
  std::optional<double> region_level;
  EvalConstants consts = EvalConstants::fast();
  QcpConfig qcp;
  std::size_t envelope_samples = 720;
  /// Above this many selected ellipses only the ones on the envelope are drawn.
  std::size_t ellipse_draw_limit = 2000;
};

struct Rendering {
  std::string svg;
  std::size_t markers = 0;
  std::size_t edges = 0;
  std::size_t ellipses_drawn = 0;
  std::size_t arcs = 0;
  std::optional<Point> region_ref;
  std::vector<Point> envelope;  // sampled boundary of the region, empty when not drawn
  std::optional<std::string> warning;
};

/// Planar drawing of the star about `center`: leaves, center, and spokes.
Rendering render_star(const PointSet& leaves, const Point& center, const RenderOptions& opts = {});

}  // namespace minstar
