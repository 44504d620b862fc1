#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "minstar/point.hpp"
#include "minstar/star_eval.hpp"

namespace minstar {

using Json = nlohmann::ordered_json;

/// Flags shared by every subcommand.
struct RunOptions {
  std::uint64_t seed = 1;
  Profile profile = Profile::fast;
  bool timing = true;  // include wall-clock phases under "time_ns"
};

/// Seed from DILATION_SEED when set, else 1. Throws ErrorKind::usage on a malformed value.
std::uint64_t default_seed();

/// Parses "x,y[,z...]"; the dimension must equal `dim`.
Point parse_center(const std::string& text, std::size_t dim);

struct EvalArgs {
  std::string file;
  std::string center;
  std::string method = "fast";  // fast | brute
};

struct CenterArgs {
  std::string file;
  std::string method = "chan";  // chan | bisect
  double eps = 1e-9;
};

struct VertexArgs {
  std::string file;
  std::string method = "fast";  // fast | brute
};

struct GenArgs {
  std::string kind = "uniform";
  std::size_t n = 100;
  std::size_t dim = 2;
  std::string out;  // empty: only return the text
};

struct RenderArgs {
  std::string file;
  std::string center;  // empty: the unconstrained optimum
  std::string svg;
  std::optional<double> region;
};

struct BenchArgs {
  std::string suite = "eval";  // eval | center | vertex
  std::string method;          // suite-specific; empty selects the default
  std::vector<std::size_t> sizes;
  std::size_t seeds = 3;
  std::size_t dim = 2;
  std::string kind = "uniform";
};

Json cmd_eval(const EvalArgs& args, const RunOptions& opts);
Json cmd_center(const CenterArgs& args, const RunOptions& opts);
Json cmd_vertex(const VertexArgs& args, const RunOptions& opts);
/// Result record plus the generated point text in `text`.
Json cmd_gen(const GenArgs& args, const RunOptions& opts, std::string* text = nullptr);
Json cmd_render(const RenderArgs& args, const RunOptions& opts);
Json cmd_bench(const BenchArgs& args, const RunOptions& opts);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Error object {"error": {"kind", "message"}}.
Json error_json(std::string_view kind, std::string_view message);

/// One human-readable line describing a command result.
std::string summary_line(const Json& record);

}  // namespace minstar
