#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "minstar/commands.hpp"
#include "minstar/error.hpp"

using namespace minstar;

namespace {

int fail(std::string_view kind, std::string_view message, int code) {
  std::cout << error_json(kind, message).dump(2) << '\n';
  std::cerr << "error (" << kind << "): " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-dilation stars: evaluation, optimal centers, and constrained centers."};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::string profile = "fast";
  bool no_timing = false;
  app.add_option("--seed", seed, "Random seed (default: $DILATION_SEED or 1)");
  app.add_option("--profile", profile, "Candidate constants: fast or safe")
      ->check(CLI::IsMember({"fast", "safe"}));
  app.add_flag("--no-timing", no_timing, "Omit wall-clock timings so output is reproducible byte for byte");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Dilation of the star about a given center");
  e->add_option("file", eval.file, "Point file")->required();
  e->add_option("--center", eval.center, "Center as x,y[,z]")->required();
  e->add_option("--method", eval.method, "fast or brute")->check(CLI::IsMember({"fast", "brute"}));

  CenterArgs center;
  auto* c = app.add_subcommand("center", "Center minimizing the star's dilation");
  c->add_option("file", center.file, "Point file")->required();
  c->add_option("--method", center.method, "chan or bisect")->check(CLI::IsMember({"chan", "bisect"}));
  c->add_option("--eps", center.eps, "Relative optimality tolerance")->check(CLI::PositiveNumber);

  VertexArgs vertex;
  auto* v = app.add_subcommand("vertex", "Best center chosen among the input points");
  v->add_option("file", vertex.file, "Point file")->required();
  v->add_option("--method", vertex.method, "fast or brute")->check(CLI::IsMember({"fast", "brute"}));

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic instance");
  g->add_option("kind", gen.kind, "uniform, clustered, collinear or annular")
      ->check(CLI::IsMember({"uniform", "clustered", "collinear", "annular"}));
  g->add_option("-n,--count", gen.n, "Number of points");
  g->add_option("-d,--dim", gen.dim, "Dimension");
  g->add_option("-o,--out", gen.out, "Output file (default: standard output)");

  RenderArgs render;
  std::optional<double> region;
  auto* r = app.add_subcommand("render", "Draw the star as SVG");
  r->add_option("file", render.file, "Point file")->required();
  r->add_option("--center", render.center, "Center as x,y (default: optimal center)");
  r->add_option("--svg", render.svg, "Output SVG file")->required();
  r->add_option("--region", region, "Overlay the region of centers with dilation below this level");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Timing table with fitted log-log slope");
  b->add_option("--suite", bench.suite, "eval, center or vertex")
      ->check(CLI::IsMember({"eval", "center", "vertex"}));
  b->add_option("--method", bench.method, "Method within the suite");
  b->add_option("--sizes", bench.sizes, "Instance sizes")->delimiter(',')->required();
  b->add_option("--seeds", bench.seeds, "Instances per size");
  b->add_option("--dim", bench.dim, "Dimension");
  b->add_option("--kind", bench.kind, "Instance family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::Success& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    return fail("usage", ex.what(), 2);
  }

  try {
    RunOptions opts;
    opts.seed = seed ? *seed : default_seed();
    opts.profile = parse_profile(profile);
    opts.timing = !no_timing;

    Json out;
    std::string text;
    if (*e) {
      out = cmd_eval(eval, opts);
    } else if (*c) {
      out = cmd_center(center, opts);
    } else if (*v) {
      out = cmd_vertex(vertex, opts);
    } else if (*g) {
      out = cmd_gen(gen, opts, &text);
      if (gen.out.empty()) {
        std::cout << text;
        std::cerr << summary_line(out) << '\n';
        return 0;
      }
    } else if (*r) {
      render.region = region;
      out = cmd_render(render, opts);
    } else {
      out = cmd_bench(bench, opts);
    }
    std::cout << out.dump(2) << '\n';
    std::cerr << summary_line(out) << '\n';
    if (out.contains("warning")) std::cerr << "warning: " << out["warning"].get<std::string>() << '\n';
    return 0;
  } catch (const Error& ex) {
    return fail(to_string(ex.kind()), ex.what(), ex.kind() == ErrorKind::usage ? 2 : 1);
  } catch (const std::exception& ex) {
    return fail("internal", ex.what(), 1);
  }
}
