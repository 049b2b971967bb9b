#pragma once

// Reference computations written independently of the library code paths
// they are compared against.

#include "vhi/space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

// Derivative of j for the two one-dimensional examples, away from kinks.
inline double ex1_slope(double u) { return (u < 1.0 || u > 2.0) ? u : 2.0 - u; }
inline double ex2_slope(double u) { return u < 1.0 ? 3.0 - 2.0 * u : 1.0; }

// Clarke gradient of a piecewise C1 scalar function: hull of the one-sided limits.
inline std::pair<double, double> clarke_hull(const std::function<double(double)>& slope, double u) {
  const double h = 1e-12 * std::max(1.0, std::abs(u));
  const double l = slope(u - h), r = slope(u + h), c = slope(u);
  return {std::min({l, r, c}), std::max({l, r, c})};
}

// dist(f, a u + dj(u)).
inline double residual(const std::function<double(double)>& slope, double a, double f, double u) {
  const auto [lo, hi] = clarke_hull(slope, u);
  const double x = f - a * u;
  if (x < lo) return lo - x;
  if (x > hi) return x - hi;
  return 0.0;
}

inline double ex1_residual(double f, double u, double a = 1.0) { return residual(ex1_slope, a, f, u); }
inline double ex2_residual(double f, double u, double a = 1.0) { return residual(ex2_slope, a, f, u); }

// Dense scan of {u in [lo, hi] : r(u) <= eps}, returned as sorted maximal runs
// (each run is [first, last] member grid point).
inline std::vector<std::pair<double, double>> level_runs(const std::function<double(double)>& r, double eps,
                                                         double lo, double hi, double step) {
  std::vector<std::pair<double, double>> runs;
  bool in = false;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long i = 0; i <= n; ++i) {
    const double u = lo + step * static_cast<double>(i);
    const bool m = r(u) <= eps;
    if (m && !in) runs.push_back({u, u});
    if (m) runs.back().second = u;
    in = m;
  }
  return runs;
}

// Closest point of a box, written out componentwise.
inline vhi::Vector clamp(const vhi::Vector& v, double lo, double hi) {
  vhi::Vector out = v;
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = std::min(hi, std::max(lo, v(i)));
  return out;
}

}  // namespace oracle
