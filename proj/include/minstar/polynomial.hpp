#pragma once

#include <span>
#include <vector>

namespace minstar {

/// Evaluates sum coeffs[k] x^k by Horner's rule.
double poly_eval(std::span<const double> coeffs, double x);

/// Distinct real roots of a polynomial of degree <= 4 given by ascending
/// coefficients, sorted ascending. Roots are isolated between critical
/// points, refined by safeguarded Newton/bisection, and double roots at
/// critical points are reported once. Roots closer than `merge_tol`
/// (relative to the root magnitude) are collapsed.
std::vector<double> real_roots(std::span<const double> coeffs, double merge_tol = 1e-7);

}  // namespace minstar
