#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "minstar/point.hpp"

namespace minstar {

/// Parses one point per line; fields separated by whitespace and/or commas,
/// '#' lines and blank lines ignored. Errors carry the 1-based line number.
PointSet parse_points(std::string_view text);
PointSet read_points_file(const std::string& path);

/// Writes points with round-trip precision, preceded by optional '#' header lines.
std::string format_points(const PointSet& points, std::string_view header = {});
void write_points_file(const std::string& path, const PointSet& points, std::string_view header = {});

enum class InstanceKind { uniform, clustered, collinear, annular };

std::string_view to_string(InstanceKind kind);
InstanceKind parse_instance_kind(std::string_view s);

/// Ratio between consecutive shells of `annular` instances.
inline constexpr double kAnnularRatio = 1.3909944487358056;  // sqrt(5/3) + 0.1

/// Deterministic synthetic instances for a fixed seed.
///  uniform   - unit cube
///  clustered - ceil(sqrt(n)) Gaussian blobs (sigma 0.02) centred in the unit cube
///  collinear - points on a line through the cube, each coordinate jittered by at most 5e-4
///  annular   - points on shells of radius kAnnularRatio^s about the origin
PointSet generate(InstanceKind kind, std::size_t n, std::size_t dim, std::uint64_t seed);

}  // namespace minstar
