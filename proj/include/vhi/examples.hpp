#pragma once

// Closed-form oracles for two one-dimensional inequalities with X = K = R,
// A u = a u (a = 1 unless stated), phi = 0 and a nonconvex j with j0(u; v) = p(u) v
// away from kinks.
//
// Example 1:  j(u) = u^2/2 (u < 1),  2u - u^2/2 - 1 (1 <= u <= 2),  u^2/2 - 1 (u > 2)
//             p(u) = u,              2 - u,                         u
// Example 2:  j(u) = -u^2 + 3u (u < 1),  u + 1 (u >= 1)
//             p(u) = 3 - 2u,             1
//
// Example 1 has a convex kink at u = 2 where p jumps from 0 to 2; there the
// Clarke gradient is [0, 2] and j0(2; v) = max(0, 2v). Every set below is
// computed from that exact subdifferential.

#include "vhi/clarke.hpp"
#include "vhi/interval.hpp"
#include "vhi/problem.hpp"

#include <optional>

namespace vhi::examples {

double ex1_p(double u);
double ex2_p(double u);
double ex1_j(double u);
double ex2_j(double u);

/// j of example 1 as a LipschitzFunctional (alpha_j = 1, breakpoints {1, 2}).
LipschitzFunctional ex1_functional();
/// j of example 2 as a LipschitzFunctional (alpha_j = 2, breakpoint {1}).
LipschitzFunctional ex2_functional();

/// Solution set of u + j0-inclusion for example 1:
/// {f/2} for f < 2, [1, 2] for f = 2, {2} for 2 < f < 4, {f/2} for f >= 4.
IntervalSet ex1_solutions(double f);
/// Empty for f < 2, {1} for f = 2, {3 - f, f - 1} for f > 2.
IntervalSet ex2_solutions(double f);

struct OmegaClosedForm {
  IntervalSet set;
  /// True when (f, eps) lies in the range where the classical branch
  /// formulas are asserted (f < 2 and eps < 2 - f; f = 2; f > 2 and eps < f - 2).
  /// Outside it the set is still exact, only not covered by those formulas.
  bool stated = false;
};

/// Omega(eps) = {u : dist(f, a u + dj(u)) <= eps} for example 1 (a = 1).
/// Throws std::invalid_argument for eps <= 0.
OmegaClosedForm ex1_omega(double f, double eps);
OmegaClosedForm ex2_omega(double f, double eps);

/// Same sets with A u = a u, a > 0. eps = 0 gives the solution set.
IntervalSet ex1_omega_scaled(double a, double f, double eps);
IntervalSet ex2_omega_scaled(double a, double f, double eps);

/// lim diam Omega(eps) as eps -> 0: 1 for f = 2, else 0.
double ex1_diam_limit(double f);
/// 0 for f = 2, 2f - 4 for f > 2, absent for f < 2 (Omega empty).
std::optional<double> ex2_diam_limit(double f);

/// Registered problems. `a` scales A = a * identity.
VhiProblem example1_problem(double f, double a = 1.0);
VhiProblem example2_problem(double f, double a = 1.0);

}  // namespace vhi::examples
