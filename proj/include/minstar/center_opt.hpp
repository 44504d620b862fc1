#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "minstar/point.hpp"
#include "minstar/star_eval.hpp"

namespace minstar {

/// Star dilation of `leaves` about `center`, via the fast evaluator. Needs two or more leaves.
double objective(const PointSet& leaves, Coords center);

/// True iff the star about `center` has dilation at most `lambda`.
bool decision(const PointSet& leaves, Coords center, double lambda);

/// Pair constraints (v_i, v_j, |v_i v_j|) stored flat.
struct FocalPairs {
  std::size_t dim = 0;
  std::vector<double> first;   // size() * dim
  std::vector<double> second;  // size() * dim
  std::vector<double> weight;

  std::size_t size() const { return weight.size(); }
  bool empty() const { return weight.empty(); }
  void add(Coords a, Coords b);
  double min_weight() const;
  double max_weight() const;

  /// h_lambda(x) = max over pairs of |v_i x| + |x v_j| - lambda |v_i v_j|.
  double excess(Coords x, double lambda, std::size_t* active = nullptr) const;
};

FocalPairs all_pairs(const PointSet& leaves);

enum class FeasibilityStop {
  converged,  // run until min h is bracketed within eps_feas
  sign        // stop as soon as the sign of min h is certified
};

struct FeasibilityResult {
  Point x;
  double h = 0;            // h_lambda(x)
  double lower_bound = 0;  // certified: min h >= lower_bound
  std::size_t iterations = 0;

  bool feasible() const { return h <= 0; }
  bool infeasible() const { return lower_bound > 0; }
};

/// Minimizes the convex function h_lambda with a deep-cut ellipsoid method.
FeasibilityResult feasibility_min(const FocalPairs& pairs, double lambda, double eps_feas,
                                  FeasibilityStop stop = FeasibilityStop::converged);

inline constexpr std::size_t kFeasibilityIterationCap = 10000;

struct QcpConfig {
  double eps_opt = 1e-9;
  double eps_feas = 1e-10;
  std::size_t base_case_size = 9;
  std::uint64_t rng_seed = 1;
  std::size_t pass_cap = 64;

  void validate() const;
};

enum class Method { bisection, chan };
std::string_view to_string(Method m);

struct OptResult {
  Point center;
  double dilation = 1;
  std::size_t witness_a = kNoWitness;
  std::size_t witness_b = kNoWitness;
  Method method = Method::bisection;
  std::size_t iterations = 0;  // bisection steps, or passes summed over all recursive calls
  std::uint64_t seed = 0;
  double lower_bound = 1;      // certified lower bound on the optimum (bisection only)

  std::size_t decision_calls = 0;
  std::size_t decision_work = 0;  // total leaves handed to the decision procedure
  std::size_t recursive_calls = 0;
  std::size_t base_cases = 0;
  bool fallback = false;          // chan gave up and the bisection answer was used
  std::vector<double> incumbent_trace;  // chan incumbent value after each update
};

OptResult solve_bisection(const PointSet& leaves, const QcpConfig& cfg = {});
OptResult solve_chan(const PointSet& leaves, const QcpConfig& cfg = {});

}  // namespace minstar
