#pragma once

#include "vhi/space.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vhi {

using ScalarField = std::function<double(const Vector&)>;
using DirectionalDerivative = std::function<double(const Vector& u, const Vector& v)>;
using VectorField = std::function<Vector(const Vector&)>;

/// A locally Lipschitz functional together with its generalized (Clarke)
/// directional derivative.
///
/// `clarke_dd` is the analytic j0(u; v) and is the value solvers trust.
/// `subgradient`, when set, returns one element of the Clarke gradient at u.
/// `alpha_j` is the declared relaxed-monotonicity constant. `breakpoints`
/// lists the kink locations of one-dimensional functionals so that grid
/// scans can include them exactly.
struct LipschitzFunctional {
  std::string name;
  ScalarField value;
  DirectionalDerivative clarke_dd;
  VectorField subgradient;
  std::optional<double> alpha_j;
  bool regular = false;
  std::vector<double> breakpoints;

  [[nodiscard]] bool has_subgradient() const { return static_cast<bool>(subgradient); }
};

/// j = 0 on R^dim.
LipschitzFunctional zero_functional(int dim);
/// j(u) = 0.5 |u|^2, convex and smooth (alpha_j = 0).
LipschitzFunctional half_squared_norm(int dim);
/// j(u) = |u|, convex with a kink at the origin.
LipschitzFunctional norm_functional(int dim);
/// j(u) = <w, u>. Used to realize j0(u; v) = <P u, v> for linear P.
LipschitzFunctional linear_clarke_functional(std::string name, std::function<Vector(const Vector&)> P,
                                             int dim);

/// Lower estimate of j0(u; v) from difference quotients.
///
/// Takes the maximum of (j(x + t v) - j(x)) / t over base points x on an
/// axis-aligned lattice within `radius` of u (full lattice up to dim 3, axis
/// lines above) and over t = radius * 2^-k, k = 1..steps.
/// Throws NonFiniteError when j returns a non-finite value.
double clarke_dd_oracle(const ScalarField& j, const Vector& u, const Vector& v, double radius,
                        int steps);

/// (j(u + t v) - j(u)) / t at fixed base point.
double one_sided_quotient(const ScalarField& j, const Vector& u, const Vector& v, double t);

struct CalculusSample {
  Vector u;
  Vector v;
  double lambda = 1.0;
};

enum class CalculusCheck { ZeroDirection, Homogeneity, Subadditivity, SubgradientBound };

struct CalculusViolation {
  CalculusCheck check;
  Vector u;
  Vector v;
  double lambda = 0.0;
  double slack = 0.0;  ///< amount by which the inequality fails (> tol)
};

struct CalculusReport {
  std::vector<CalculusViolation> violations;
  std::size_t checks = 0;

  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks j0(u;0) = 0, positive homogeneity in v, subadditivity on the pairs
/// (v, lambda v) and (v, -lambda v), and <xi(u), v> <= j0(u; v) when a
/// subgradient selection is present. Violations are data, not errors.
CalculusReport check_calculus_properties(const LipschitzFunctional& j,
                                         const std::vector<CalculusSample>& sample, double tol);

/// Sampled lower bound of the relaxed-monotonicity constant:
/// max over pairs of [j0(v1; v2-v1) + j0(v2; v1-v2)] / |v1-v2|^2, floored at 0.
/// Throws std::invalid_argument on an empty sample or a pair with v1 == v2.
double estimate_alpha_j(const LipschitzFunctional& j,
                        const std::vector<std::pair<Vector, Vector>>& sample);

const char* to_string(CalculusCheck c);

}  // namespace vhi
