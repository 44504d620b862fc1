#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "minstar/knn.hpp"
#include "minstar/point.hpp"

namespace minstar {

inline constexpr std::size_t kNoWitness = static_cast<std::size_t>(-1);

/// Dilation of a star together with the leaf pair realising it.
/// Stars with fewer than two leaves have dilation 1 and no witness.
struct DilationReport {
  double dilation = 1.0;
  std::size_t witness_a = kNoWitness;
  std::size_t witness_b = kNoWitness;
};

enum class Profile { fast, safe };

std::string_view to_string(Profile p);
Profile parse_profile(std::string_view s);

/// Constants controlling candidate-pair generation.
struct EvalConstants {
  double gamma_threshold = 4.0;
  std::size_t knn_k = 16;
  std::size_t rank_window_l = 16;
  Profile profile = Profile::fast;

  /// Empirically sufficient defaults: k = l = 16.
  static EvalConstants fast();
  /// Provable neighbour count for Gamma = 4 in dimension `dim`, window 64.
  static EvalConstants safe(std::size_t dim);
  static EvalConstants for_profile(Profile p, std::size_t dim);

  /// Throws ErrorKind::constants_undefined unless Gamma > 3, k >= 1, l >= 1.
  void validate() const;
};

/// Constants of the high-dilation argument for a threshold Gamma.
struct DerivedConstants {
  double phi;    // |ac| >= phi |a a^|
  double gamma;  // spacing of points near a, relative to |a a^|
  double sigma;  // grid cell side, relative to |a a^|
  std::size_t k; // neighbours that must contain a^
};

/// Upper limit on a derived neighbour count before it is treated as overflow.
inline constexpr double kMaxDerivedK = 1e7;

DerivedConstants derive_constants(double gamma_threshold, std::size_t dim);

/// Deduplicated unordered leaf pairs, each stored as (smaller, larger) index.
struct CandidatePairList {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Exact dilation over all pairs; ties go to the lexicographically smallest pair.
DilationReport evaluate_brute(const PointSet& leaves, Coords center);

/// Pairs of each leaf with its k nearest neighbours.
CandidatePairList candidates_high(const PointSet& leaves, const EvalConstants& consts);
CandidatePairList candidates_high(const NeighborTable& knn);

/// Leaf indices sorted by distance from `center`, ties by index.
std::vector<std::size_t> distance_order(const PointSet& leaves, Coords center);

/// Pairs within `rank_window_l` ranks of each other in distance order from `center`.
CandidatePairList candidates_low(const PointSet& leaves, Coords center, const EvalConstants& consts);

/// Dilation maximised over the union of both candidate families.
DilationReport evaluate_fast(const PointSet& leaves, Coords center,
                             const EvalConstants& consts = EvalConstants::fast());

/// Annulus ratio for a measured dilation: sqrt((D+1)/(D-1)) + 1e-6, with D
/// clamped to at least 1 + 1e-6.
double diagnostic_rho(double dilation);

}  // namespace minstar
