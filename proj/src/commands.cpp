#include "minstar/commands.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "minstar/center_opt.hpp"
#include "minstar/error.hpp"
#include "minstar/io.hpp"
#include "minstar/svg.hpp"
#include "minstar/vertex_opt.hpp"

namespace minstar {

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  Stopwatch() : start_(Clock::now()) {}
  std::int64_t lap() {
    const auto now = Clock::now();
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(now - start_).count();
    start_ = now;
    return ns;
  }

 private:
  Clock::time_point start_;
};

Json header(std::string_view command, const std::string& input, const RunOptions& opts) {
  Json j;
  j["command"] = command;
  if (!input.empty()) j["input"] = input;
  j["seed"] = opts.seed;
  j["profile"] = to_string(opts.profile);
  return j;
}

void finish(Json& j, const RunOptions& opts, const Json& phases) {
  if (opts.timing) j["time_ns"] = phases;
}

Json coords_json(Coords c) { return Json(std::vector<double>(c.begin(), c.end())); }

Json witness_json(std::size_t a, std::size_t b) {
  if (a == kNoWitness) return nullptr;
  return Json::array({a, b});
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::uint64_t instance_seed(std::uint64_t base, std::size_t size, std::size_t rep) {
  return base * 1000003ULL + size * 31ULL + rep;
}

}  // namespace

std::uint64_t default_seed() {
  const char* env = std::getenv("DILATION_SEED");
  if (env == nullptr || *env == '\0') return 1;
  const auto v = parse_u64(env);
  if (!v) throw Error(ErrorKind::usage, std::string("DILATION_SEED is not an unsigned integer: ") + env);
  return *v;
}

Point parse_center(const std::string& text, std::size_t dim) {
  std::vector<double> c;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t");
    const auto e = field.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorKind::usage, "empty coordinate in center '" + text + "'");
    const std::string_view tok(field.data() + b, e - b + 1);
    double v = 0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || end != tok.data() + tok.size() || !std::isfinite(v))
      throw Error(ErrorKind::usage, "bad coordinate '" + std::string(tok) + "' in center");
    c.push_back(v);
  }
  if (text.empty() || text.back() == ',') throw Error(ErrorKind::usage, "missing center coordinates");
  if (c.size() != dim)
    throw Error(ErrorKind::usage,
                "center has " + std::to_string(c.size()) + " coordinates, points have " + std::to_string(dim));
  return Point(std::move(c));
}

Json cmd_eval(const EvalArgs& args, const RunOptions& opts) {
  if (args.center.empty()) throw Error(ErrorKind::usage, "eval needs --center");
  if (args.method != "fast" && args.method != "brute")
    throw Error(ErrorKind::usage, "unknown eval method '" + args.method + "'");
  Stopwatch sw;
  const PointSet leaves = read_points_file(args.file);
  const Point center = parse_center(args.center, leaves.dim());
  Json phases;
  phases["read"] = sw.lap();
  const auto consts = EvalConstants::for_profile(opts.profile, leaves.dim());
  const DilationReport r =
      args.method == "fast" ? evaluate_fast(leaves, center, consts) : evaluate_brute(leaves, center);
  phases["evaluate"] = sw.lap();

  Json j = header("eval", args.file, opts);
  j["n"] = leaves.size();
  j["dim"] = leaves.dim();
  j["method"] = args.method;
  j["center"] = coords_json(center);
  j["dilation"] = r.dilation;
  j["witness"] = witness_json(r.witness_a, r.witness_b);
  finish(j, opts, phases);
  return j;
}

Json cmd_center(const CenterArgs& args, const RunOptions& opts) {
  if (args.method != "chan" && args.method != "bisect")
    throw Error(ErrorKind::usage, "unknown center method '" + args.method + "'");
  Stopwatch sw;
  const PointSet leaves = read_points_file(args.file);
  if (leaves.size() < 2) throw Error(ErrorKind::usage, "center needs at least two points");
  Json phases;
  phases["read"] = sw.lap();
  QcpConfig cfg;
  cfg.eps_opt = args.eps;
  cfg.rng_seed = opts.seed;
  const OptResult r = args.method == "chan" ? solve_chan(leaves, cfg) : solve_bisection(leaves, cfg);
  phases["solve"] = sw.lap();

  Json j = header("center", args.file, opts);
  j["n"] = leaves.size();
  j["dim"] = leaves.dim();
  j["method"] = to_string(r.method);
  j["center"] = coords_json(r.center);
  j["dilation"] = r.dilation;
  j["witness"] = witness_json(r.witness_a, r.witness_b);
  j["iterations"] = r.iterations;
  j["eps"] = args.eps;
  j["decision_calls"] = r.decision_calls;
  j["decision_work"] = r.decision_work;
  j["fallback"] = r.fallback;
  finish(j, opts, phases);
  return j;
}

Json cmd_vertex(const VertexArgs& args, const RunOptions& opts) {
  if (args.method != "fast" && args.method != "brute")
    throw Error(ErrorKind::usage, "unknown vertex method '" + args.method + "'");
  Stopwatch sw;
  const PointSet leaves = read_points_file(args.file);
  if (args.method == "fast" && leaves.dim() != 2)
    throw Error(ErrorKind::unsupported_dimension, "vertex --method fast is planar only; use --method brute");
  Json phases;
  phases["read"] = sw.lap();
  const auto consts = EvalConstants::for_profile(opts.profile, leaves.dim());
  QcpConfig cfg;
  cfg.rng_seed = opts.seed;
  const ConstrainedResult r =
      args.method == "fast" ? solve_constrained(leaves, cfg, consts, opts.seed) : solve_constrained_brute(leaves);
  phases["solve"] = sw.lap();

  Json j = header("vertex", args.file, opts);
  j["n"] = leaves.size();
  j["dim"] = leaves.dim();
  j["method"] = args.method;
  j["center_index"] = r.center_index;
  j["center"] = coords_json(leaves[r.center_index]);
  j["dilation"] = r.dilation;
  j["iterations"] = r.loop_iterations;
  if (args.method == "fast") {
    j["pruned_counts"] = r.pruned_counts;
    j["brute_membership_rounds"] = r.brute_membership_rounds;
    j["truncated_pairs"] = r.truncated_pairs;
    j["fallback"] = r.fallback;
  }
  finish(j, opts, phases);
  return j;
}

Json cmd_gen(const GenArgs& args, const RunOptions& opts, std::string* text) {
  if (args.n < 1) throw Error(ErrorKind::usage, "gen needs n >= 1");
  if (args.dim < 2) throw Error(ErrorKind::usage, "gen needs dim >= 2");
  InstanceKind kind;
  try {
    kind = parse_instance_kind(args.kind);
  } catch (const Error& e) {
    throw Error(ErrorKind::usage, e.what());
  }
  const PointSet pts = generate(kind, args.n, args.dim, opts.seed);
  const std::string hdr = "generated " + std::string(to_string(kind)) + " n=" + std::to_string(args.n) +
                          " dim=" + std::to_string(args.dim) + " seed=" + std::to_string(opts.seed);
  const std::string body = format_points(pts, hdr);
  if (!args.out.empty()) {
    std::ofstream f(args.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::io, "cannot open '" + args.out + "' for writing");
    f << body;
    if (!f) throw Error(ErrorKind::io, "write to '" + args.out + "' failed");
  }
  if (text) *text = body;

  Json j = header("gen", "", opts);
  j["kind"] = to_string(kind);
  j["n"] = pts.size();
  j["dim"] = pts.dim();
  if (!args.out.empty()) j["output"] = args.out;
  return j;
}

Json cmd_render(const RenderArgs& args, const RunOptions& opts) {
  if (args.svg.empty()) throw Error(ErrorKind::usage, "render needs --svg");
  Stopwatch sw;
  const PointSet leaves = read_points_file(args.file);
  if (leaves.dim() != 2) throw Error(ErrorKind::unsupported_dimension, "render is planar only");
  QcpConfig cfg;
  cfg.rng_seed = opts.seed;
  const Point center = args.center.empty() ? solve_chan(leaves, cfg).center : parse_center(args.center, 2);
  RenderOptions ro;
  ro.region_level = args.region;
  ro.consts = EvalConstants::for_profile(opts.profile, 2);
  ro.qcp = cfg;
  const Rendering r = render_star(leaves, center, ro);
  std::ofstream f(args.svg, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot open '" + args.svg + "' for writing");
  f << r.svg;
  if (!f) throw Error(ErrorKind::io, "write to '" + args.svg + "' failed");
  Json phases;
  phases["render"] = sw.lap();

  Json j = header("render", args.file, opts);
  j["svg"] = args.svg;
  j["center"] = coords_json(center);
  j["markers"] = r.markers;
  j["edges"] = r.edges;
  if (args.region) {
    j["region"] = *args.region;
    j["ellipses"] = r.ellipses_drawn;
    j["arcs"] = r.arcs;
    j["envelope_points"] = r.envelope.size();
  }
  if (r.warning) j["warning"] = *r.warning;
  finish(j, opts, phases);
  return j;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::input, "slope needs two or more samples");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

Json cmd_bench(const BenchArgs& args, const RunOptions& opts) {
  if (args.sizes.empty()) throw Error(ErrorKind::usage, "bench needs --sizes");
  if (args.seeds < 1) throw Error(ErrorKind::usage, "bench needs --seeds >= 1");
  const bool eval = args.suite == "eval", center = args.suite == "center", vertex = args.suite == "vertex";
  if (!eval && !center && !vertex) throw Error(ErrorKind::usage, "unknown bench suite '" + args.suite + "'");
  std::string method = args.method;
  if (method.empty()) method = eval ? "fast" : center ? "chan" : "fast";
  if ((eval || vertex) && method != "fast" && method != "brute")
    throw Error(ErrorKind::usage, "unknown method '" + method + "'");
  if (center && method != "chan" && method != "bisect") throw Error(ErrorKind::usage, "unknown method '" + method + "'");
  if (vertex && args.dim != 2) throw Error(ErrorKind::unsupported_dimension, "vertex bench is planar only");
  InstanceKind kind;
  try {
    kind = parse_instance_kind(args.kind);
  } catch (const Error& e) {
    throw Error(ErrorKind::usage, e.what());
  }
  const auto consts = EvalConstants::for_profile(opts.profile, args.dim);

  Json rows = Json::array();
  std::vector<double> ns, times, works;
  for (std::size_t n : args.sizes) {
    std::vector<double> t, work, iters;
    for (std::size_t s = 0; s < args.seeds; ++s) {
      const std::uint64_t seed = instance_seed(opts.seed, n, s);
      const PointSet pts = generate(kind, n, args.dim, seed);
      Stopwatch sw;
      if (eval) {
        const Point c = generate(InstanceKind::uniform, 1, args.dim, seed ^ 0x5bd1e995ULL).point(0);
        if (method == "fast")
          evaluate_fast(pts, c, consts);
        else
          evaluate_brute(pts, c);
      } else if (center) {
        QcpConfig cfg;
        cfg.rng_seed = seed;
        const OptResult r = method == "chan" ? solve_chan(pts, cfg) : solve_bisection(pts, cfg);
        work.push_back(static_cast<double>(r.decision_work));
      } else {
        QcpConfig cfg;
        cfg.rng_seed = seed;
        const ConstrainedResult r =
            method == "fast" ? solve_constrained(pts, cfg, consts, seed) : solve_constrained_brute(pts);
        iters.push_back(static_cast<double>(r.loop_iterations));
      }
      t.push_back(static_cast<double>(sw.lap()));
    }
    Json row;
    row["n"] = n;
    row["median_ns"] = median(t);
    ns.push_back(static_cast<double>(n));
    times.push_back(std::max(median(t), 1.0));
    if (center) {
      row["median_decision_work"] = median(work);
      works.push_back(std::max(median(work), 1.0));
    }
    if (vertex) {
      double mean = 0;
      for (double v : iters) mean += v;
      mean /= static_cast<double>(iters.size());
      row["mean_iterations"] = mean;
      row["log2_n"] = std::log2(static_cast<double>(n));
    }
    rows.push_back(row);
  }

  Json j = header("bench", "", opts);
  j["suite"] = args.suite;
  j["method"] = method;
  j["kind"] = to_string(kind);
  j["dim"] = args.dim;
  j["seeds"] = args.seeds;
  j["rows"] = rows;
  if (ns.size() >= 2) {
    j["time_slope"] = loglog_slope(ns, times);
    if (center) j["work_slope"] = loglog_slope(ns, works);
  }
  return j;
}

Json error_json(std::string_view kind, std::string_view message) {
  Json j;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  return j;
}

std::string summary_line(const Json& r) {
  std::ostringstream s;
  s << r.value("command", std::string("?"));
  if (r.contains("n")) s << " n=" << r["n"].dump();
  if (r.contains("dilation")) s << " dilation=" << r["dilation"].dump();
  if (r.contains("center_index")) s << " center_index=" << r["center_index"].dump();
  if (r.contains("time_slope")) s << " slope=" << r["time_slope"].dump();
  if (r.contains("svg")) s << " svg=" << r["svg"].get<std::string>();
  s << " seed=" << r["seed"].dump();
  return s.str();
}

}  // namespace minstar
