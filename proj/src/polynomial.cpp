#include "minstar/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minstar {

double poly_eval(std::span<const double> coeffs, double x) {
  double r = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * x + *it;
  return r;
}

namespace {

// Sum of |c_k x^k|: the magnitude against which rounding error in p(x) is measured.
double term_scale(std::span<const double> c, double x) {
  double r = 0.0;
  const double ax = std::abs(x);
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * ax + std::abs(*it);
  return r;
}

double derivative_eval(std::span<const double> c, double x) {
  double r = 0.0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) r = r * x + static_cast<double>(k) * c[k];
  return r;
}

// Root of p in [lo, hi] given p(lo) and p(hi) of opposite sign.
double refine(std::span<const double> c, double lo, double hi, double flo) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = poly_eval(c, x);
    if (fx == 0.0) return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    const double dfx = derivative_eval(c, x);
    double next = dfx != 0.0 ? x - fx / dfx : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

std::vector<double> roots_impl(std::span<const double> c) {
  const std::size_t deg = c.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-c[0] / c[1]};

  std::vector<double> dc(deg);
  for (std::size_t k = 1; k <= deg; ++k) dc[k - 1] = static_cast<double>(k) * c[k];
  std::vector<double> crit = roots_impl(dc);

  // Cauchy bound keeps all real roots strictly inside [-bound, bound].
  double bound = 0.0;
  for (std::size_t k = 0; k < deg; ++k) bound = std::max(bound, std::abs(c[k] / c[deg]));
  bound += 1.0;

  std::vector<double> knots;
  knots.push_back(-bound);
  for (double x : crit) {
    if (x > -bound && x < bound) knots.push_back(x);
  }
  knots.push_back(bound);

  std::vector<double> roots;
  constexpr double kTouchTol = 1e-11;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k], b = knots[k + 1];
    const double fa = poly_eval(c, a), fb = poly_eval(c, b);
    if (fa == 0.0) {
      roots.push_back(a);
      continue;
    }
    if ((fa < 0) != (fb < 0) && fb != 0.0) roots.push_back(refine(c, a, b, fa));
  }
  // Critical points where the polynomial (nearly) touches zero are double roots.
  for (double x : crit) {
    const double fx = poly_eval(c, x);
    if (std::abs(fx) <= kTouchTol * term_scale(c, x)) roots.push_back(x);
  }
  if (poly_eval(c, knots.back()) == 0.0) roots.push_back(knots.back());
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::vector<double> real_roots(std::span<const double> coeffs, double merge_tol) {
  // Drop negligible leading terms; they only carry roots far outside the
  // range of interest.
  double cmax = 0.0;
  for (double v : coeffs) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) return {};
  std::size_t n = coeffs.size();
  while (n > 1 && std::abs(coeffs[n - 1]) <= 1e-14 * cmax) --n;
  std::vector<double> c(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(n));
  for (double& v : c) v /= cmax;

  std::vector<double> roots = roots_impl(c);
  std::vector<double> merged;
  for (double x : roots) {
    if (!merged.empty() && std::abs(x - merged.back()) <= merge_tol * std::max(1.0, std::abs(x))) {
      // Keep whichever candidate has the smaller residual.
      if (std::abs(poly_eval(c, x)) < std::abs(poly_eval(c, merged.back()))) merged.back() = x;
      continue;
    }
    merged.push_back(x);
  }
  return merged;
}

}  // namespace minstar
