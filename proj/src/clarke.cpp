#include "vhi/clarke.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace vhi {

LipschitzFunctional zero_functional(int dim) {
  LipschitzFunctional j;
  j.name = "zero";
  j.value = [](const Vector&) { return 0.0; };
  j.clarke_dd = [](const Vector&, const Vector&) { return 0.0; };
  j.subgradient = [dim](const Vector&) { return Vector::Zero(dim).eval(); };
  j.alpha_j = 0.0;
  j.regular = true;
  return j;
}

LipschitzFunctional half_squared_norm(int dim) {
  LipschitzFunctional j;
  j.name = "half_squared_norm";
  j.value = [](const Vector& u) { return 0.5 * u.squaredNorm(); };
  j.clarke_dd = [](const Vector& u, const Vector& v) { return inner(u, v); };
  j.subgradient = [dim](const Vector& u) {
    if (u.size() != dim) throw DimensionError("half_squared_norm: dimension mismatch");
    return u;
  };
  j.alpha_j = 0.0;
  j.regular = true;
  return j;
}

LipschitzFunctional norm_functional(int dim) {
  LipschitzFunctional j;
  j.name = "norm";
  j.value = [](const Vector& u) { return u.norm(); };
  j.clarke_dd = [](const Vector& u, const Vector& v) {
    const double n = u.norm();
    if (n == 0.0) return v.norm();
    return inner(u, v) / n;
  };
  j.subgradient = [dim](const Vector& u) {
    const double n = u.norm();
    if (n == 0.0) return Vector::Zero(dim).eval();
    return (u / n).eval();
  };
  j.alpha_j = 0.0;
  j.regular = true;
  return j;
}

LipschitzFunctional linear_clarke_functional(std::string name, std::function<Vector(const Vector&)> P,
                                             int dim) {
  LipschitzFunctional j;
  j.name = std::move(name);
  // Only the derivative is meaningful here; P need not be a gradient field.
  j.value = [](const Vector&) -> double {
    throw std::logic_error("linear_clarke_functional: value is not defined, only j0");
  };
  j.clarke_dd = [P](const Vector& u, const Vector& v) { return inner(P(u), v); };
  j.subgradient = [P, dim](const Vector& u) {
    Vector p = P(u);
    if (p.size() != dim) throw DimensionError("linear_clarke_functional: P has wrong dimension");
    return p;
  };
  j.regular = true;
  return j;
}

namespace {

double checked(double x, const char* where) {
  if (!std::isfinite(x)) throw NonFiniteError(fmt::format("{}: non-finite functional value", where));
  return x;
}

std::vector<Vector> oracle_lattice(const Vector& u, double radius) {
  const int n = static_cast<int>(u.size());
  constexpr int m = 4;  // lattice points per half-axis
  std::vector<Vector> pts;
  if (n <= 3) {
    const int side = 2 * m + 1;
    int total = 1;
    for (int i = 0; i < n; ++i) total *= side;
    for (int idx = 0; idx < total; ++idx) {
      Vector x = u;
      int rem = idx;
      for (int i = 0; i < n; ++i) {
        const int k = rem % side - m;
        rem /= side;
        x(i) += radius * static_cast<double>(k) / m / std::sqrt(static_cast<double>(n));
      }
      pts.push_back(std::move(x));
    }
  } else {
    pts.push_back(u);
    for (int i = 0; i < n; ++i) {
      for (int k = 1; k <= m; ++k) {
        Vector x = u;
        x(i) += radius * k / m;
        pts.push_back(x);
        x(i) = u(i) - radius * k / m;
        pts.push_back(std::move(x));
      }
    }
  }
  return pts;
}

}  // namespace

double one_sided_quotient(const ScalarField& j, const Vector& u, const Vector& v, double t) {
  require_same_dim(u, v, "one_sided_quotient");
  if (!(t > 0.0)) throw std::invalid_argument("one_sided_quotient: step must be positive");
  const Vector x = u + t * v;
  return (checked(j(x), "one_sided_quotient") - checked(j(u), "one_sided_quotient")) / t;
}

double clarke_dd_oracle(const ScalarField& j, const Vector& u, const Vector& v, double radius,
                        int steps) {
  require_same_dim(u, v, "clarke_dd_oracle");
  if (!(radius > 0.0) || steps < 1)
    throw std::invalid_argument("clarke_dd_oracle: radius must be > 0 and steps >= 1");
  if (v.norm() == 0.0) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& x : oracle_lattice(u, radius)) {
    const double jx = checked(j(x), "clarke_dd_oracle");
    double t = radius;
    for (int k = 1; k <= steps; ++k) {
      t *= 0.5;
      const double q = (checked(j(x + t * v), "clarke_dd_oracle") - jx) / t;
      best = std::max(best, q);
    }
  }
  return best;
}

const char* to_string(CalculusCheck c) {
  switch (c) {
    case CalculusCheck::ZeroDirection: return "zero_direction";
    case CalculusCheck::Homogeneity: return "homogeneity";
    case CalculusCheck::Subadditivity: return "subadditivity";
    case CalculusCheck::SubgradientBound: return "subgradient_bound";
  }
  return "unknown";
}

CalculusReport check_calculus_properties(const LipschitzFunctional& j,
                                         const std::vector<CalculusSample>& sample, double tol) {
  CalculusReport report;
  auto record = [&](CalculusCheck c, const CalculusSample& s, double slack) {
    ++report.checks;
    if (slack > tol) report.violations.push_back({c, s.u, s.v, s.lambda, slack});
  };
  for (const auto& s : sample) {
    require_same_dim(s.u, s.v, "check_calculus_properties");
    const Vector zero = Vector::Zero(s.v.size());
    const double dv = j.clarke_dd(s.u, s.v);
    record(CalculusCheck::ZeroDirection, s, std::abs(j.clarke_dd(s.u, zero)));
    if (s.lambda >= 0.0) {
      record(CalculusCheck::Homogeneity, s,
             std::abs(j.clarke_dd(s.u, s.lambda * s.v) - s.lambda * dv));
    }
    for (const double sign : {1.0, -1.0}) {
      const Vector w = sign * std::abs(s.lambda) * s.v;
      const double lhs = j.clarke_dd(s.u, s.v + w);
      const double rhs = dv + j.clarke_dd(s.u, w);
      record(CalculusCheck::Subadditivity, s, lhs - rhs);
    }
    if (j.has_subgradient()) {
      const Vector xi = j.subgradient(s.u);
      record(CalculusCheck::SubgradientBound, s, inner(xi, s.v) - dv);
    }
  }
  return report;
}

double estimate_alpha_j(const LipschitzFunctional& j,
                        const std::vector<std::pair<Vector, Vector>>& sample) {
  if (sample.empty()) throw std::invalid_argument("estimate_alpha_j: empty sample");
  double best = 0.0;
  for (const auto& [v1, v2] : sample) {
    require_same_dim(v1, v2, "estimate_alpha_j");
    const Vector d = v2 - v1;
    const double n2 = d.squaredNorm();
    if (n2 == 0.0) throw std::invalid_argument("estimate_alpha_j: coincident pair");
    const double q = (j.clarke_dd(v1, d) + j.clarke_dd(v2, -d)) / n2;
    best = std::max(best, q);
  }
  return best;
}

}  // namespace vhi
