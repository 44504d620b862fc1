#include "minstar/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "minstar/error.hpp"
#include "minstar/random.hpp"

namespace minstar {

namespace {

Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

PointSet parse_points(std::string_view text) {
  std::vector<double> flat;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  std::set<std::vector<double>> seen;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;

    std::vector<double> row;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == ',')) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != ',') ++end;
      const std::string_view tok = line.substr(pos, end - pos);
      double v = 0;
      const char* b = tok.data();
      if (!tok.empty() && tok.front() == '+') ++b;
      auto [ptr, ec] = std::from_chars(b, tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw parse_error(line_no, "not a finite number: '" + std::string(tok) + "'");
      }
      row.push_back(v);
      pos = end;
    }
    if (dim == 0) {
      if (row.size() < 2) throw parse_error(line_no, "points need at least 2 coordinates");
      dim = row.size();
    } else if (row.size() != dim) {
      throw parse_error(line_no, "expected " + std::to_string(dim) + " coordinates, found " +
                                     std::to_string(row.size()));
    }
    if (!seen.insert(row).second) throw parse_error(line_no, "duplicate point");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  if (flat.empty()) throw Error(ErrorKind::parse, "no points");
  return PointSet::from_flat(dim, std::move(flat));
}

PointSet read_points_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_points(ss.str());
}

std::string format_points(const PointSet& points, std::string_view header) {
  std::string out;
  std::string_view h = header;
  while (!h.empty()) {
    const std::size_t nl = h.find('\n');
    out += "# ";
    out += h.substr(0, nl);
    out += '\n';
    h = nl == std::string_view::npos ? std::string_view{} : h.substr(nl + 1);
  }
  char buf[32];
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < points.dim(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", points[i][k]);
      if (k) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_points_file(const std::string& path, const PointSet& points, std::string_view header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << format_points(points, header);
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::uniform: return "uniform";
    case InstanceKind::clustered: return "clustered";
    case InstanceKind::collinear: return "collinear";
    case InstanceKind::annular: return "annular";
  }
  return "uniform";
}

InstanceKind parse_instance_kind(std::string_view s) {
  for (auto k : {InstanceKind::uniform, InstanceKind::clustered, InstanceKind::collinear, InstanceKind::annular}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorKind::usage, "unknown instance kind '" + std::string(s) + "'");
}

PointSet generate(InstanceKind kind, std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::usage, "n must be positive");
  if (dim < 2) throw Error(ErrorKind::usage, "dimension must be at least 2");
  Rng rng(seed);

  std::vector<std::vector<double>> blobs;
  if (kind == InstanceKind::clustered) {
    const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    for (std::size_t b = 0; b < m; ++b) {
      std::vector<double> c(dim);
      for (double& x : c) x = rng.uniform(0.1, 0.9);
      blobs.push_back(std::move(c));
    }
  }
  const std::size_t shells =
      std::min<std::size_t>(24, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))));

  std::set<std::vector<double>> seen;
  std::vector<double> flat;
  flat.reserve(n * dim);
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < n;) {
    switch (kind) {
      case InstanceKind::uniform:
        for (double& x : p) x = rng.uniform();
        break;
      case InstanceKind::clustered: {
        const auto& c = blobs[rng.index(blobs.size())];
        for (std::size_t k = 0; k < dim; ++k) p[k] = c[k] + 0.02 * rng.normal();
        break;
      }
      case InstanceKind::collinear: {
        const double t = rng.uniform();
        double slope = 1.0;
        for (std::size_t k = 0; k < dim; ++k, slope *= 0.5) p[k] = t * slope + rng.uniform(-5e-4, 5e-4);
        break;
      }
      case InstanceKind::annular: {
        double norm = 0.0;
        do {
          norm = 0.0;
          for (double& x : p) {
            x = rng.normal();
            norm += x * x;
          }
        } while (norm < 1e-12);
        const double radius = std::pow(kAnnularRatio, static_cast<double>(i % shells));
        const double scale = radius / std::sqrt(norm);
        for (double& x : p) x *= scale;
        break;
      }
    }
    if (!seen.insert(p).second) continue;
    flat.insert(flat.end(), p.begin(), p.end());
    ++i;
  }
  return PointSet::from_flat(dim, std::move(flat));
}

}  // namespace minstar
