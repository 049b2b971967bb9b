#include "vhi/examples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace vhi::examples {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Graph piece of the set-valued map u -> a u + dj(u): on [lo, hi] it is the
// affine function slope * u + intercept; a point piece (lo == hi) may instead
// carry a value interval [vmin, vmax].
struct Piece {
  double lo;
  double hi;
  double slope;
  double intercept;
  std::optional<Interval> values;
};

IntervalSet sublevel(const std::vector<Piece>& pieces, double f, double eps) {
  IntervalSet out;
  for (const auto& pc : pieces) {
    if (pc.values) {
      const double d = std::max({0.0, pc.values->lo - f, f - pc.values->hi});
      if (d <= eps) out.add({pc.lo, pc.lo});
      continue;
    }
    if (pc.slope == 0.0) {
      if (std::abs(pc.intercept - f) <= eps) out.add({pc.lo, pc.hi});
      continue;
    }
    const double x1 = (f - eps - pc.intercept) / pc.slope;
    const double x2 = (f + eps - pc.intercept) / pc.slope;
    const double lo = std::max(std::min(x1, x2), pc.lo);
    const double hi = std::min(std::max(x1, x2), pc.hi);
    if (lo <= hi) out.add({lo, hi});
  }
  return out;
}

std::vector<Piece> ex1_pieces(double a) {
  return {
      {-kInf, 1.0, a + 1.0, 0.0, std::nullopt},
      {1.0, 2.0, a - 1.0, 2.0, std::nullopt},
      {2.0, 2.0, 0.0, 0.0, Interval{2.0 * a, 2.0 * a + 2.0}},
      {2.0, kInf, a + 1.0, 0.0, std::nullopt},
  };
}

std::vector<Piece> ex2_pieces(double a) {
  return {
      {-kInf, 1.0, a - 2.0, 3.0, std::nullopt},
      {1.0, kInf, a, 1.0, std::nullopt},
  };
}

void require_eps(double eps, const char* where) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument(fmt::format("{}: eps must be positive, got {}", where, eps));
}

bool branch_formula_range(double f, double eps) {
  if (f < 2.0) return eps < 2.0 - f;
  if (f == 2.0) return true;
  return eps < f - 2.0;
}

}  // namespace

double ex1_p(double u) {
  if (u < 1.0) return u;
  if (u <= 2.0) return 2.0 - u;
  return u;
}

double ex2_p(double u) { return u < 1.0 ? 3.0 - 2.0 * u : 1.0; }

double ex1_j(double u) {
  if (u < 1.0) return 0.5 * u * u;
  if (u <= 2.0) return 2.0 * u - 0.5 * u * u - 1.0;
  return 0.5 * u * u - 1.0;
}

double ex2_j(double u) { return u < 1.0 ? -u * u + 3.0 * u : u + 1.0; }

LipschitzFunctional ex1_functional() {
  LipschitzFunctional j;
  j.name = "example1_j";
  j.value = [](const Vector& u) { return ex1_j(u(0)); };
  j.clarke_dd = [](const Vector& u, const Vector& v) {
    if (u(0) == 2.0) return std::max(0.0, 2.0 * v(0));
    return ex1_p(u(0)) * v(0);
  };
  j.subgradient = [](const Vector& u) { return make_vector({ex1_p(u(0))}); };
  j.alpha_j = 1.0;
  j.regular = true;
  j.breakpoints = {1.0, 2.0};
  return j;
}

LipschitzFunctional ex2_functional() {
  LipschitzFunctional j;
  j.name = "example2_j";
  j.value = [](const Vector& u) { return ex2_j(u(0)); };
  j.clarke_dd = [](const Vector& u, const Vector& v) { return ex2_p(u(0)) * v(0); };
  j.subgradient = [](const Vector& u) { return make_vector({ex2_p(u(0))}); };
  j.alpha_j = 2.0;
  j.regular = true;
  j.breakpoints = {1.0};
  return j;
}

IntervalSet ex1_solutions(double f) {
  if (f < 2.0) return IntervalSet::point(f / 2.0);
  if (f == 2.0) return IntervalSet({{1.0, 2.0}});
  if (f < 4.0) return IntervalSet::point(2.0);
  return IntervalSet::point(f / 2.0);
}

IntervalSet ex2_solutions(double f) {
  if (f < 2.0) return {};
  if (f == 2.0) return IntervalSet::point(1.0);
  IntervalSet s;
  s.add({3.0 - f, 3.0 - f});
  s.add({f - 1.0, f - 1.0});
  return s;
}

IntervalSet ex1_omega_scaled(double a, double f, double eps) {
  if (!(a > 0.0)) throw std::invalid_argument("ex1_omega_scaled: a must be positive");
  if (eps < 0.0) throw std::invalid_argument("ex1_omega_scaled: eps must be >= 0");
  return sublevel(ex1_pieces(a), f, eps);
}

IntervalSet ex2_omega_scaled(double a, double f, double eps) {
  if (!(a > 0.0)) throw std::invalid_argument("ex2_omega_scaled: a must be positive");
  if (eps < 0.0) throw std::invalid_argument("ex2_omega_scaled: eps must be >= 0");
  return sublevel(ex2_pieces(a), f, eps);
}

OmegaClosedForm ex1_omega(double f, double eps) {
  require_eps(eps, "ex1_omega");
  return {ex1_omega_scaled(1.0, f, eps), branch_formula_range(f, eps)};
}

OmegaClosedForm ex2_omega(double f, double eps) {
  require_eps(eps, "ex2_omega");
  return {ex2_omega_scaled(1.0, f, eps), branch_formula_range(f, eps)};
}

double ex1_diam_limit(double f) { return f == 2.0 ? 1.0 : 0.0; }

std::optional<double> ex2_diam_limit(double f) {
  if (f < 2.0) return std::nullopt;
  if (f == 2.0) return 0.0;
  return 2.0 * f - 4.0;
}

namespace {

VhiProblem scalar_problem(std::string name, double f, double a, LipschitzFunctional j,
                          IntervalSet (*omega)(double, double, double)) {
  VhiProblem p(std::move(name), 1, ConstraintSet::whole_space(1), OperatorA::scaled_identity(a),
               BiFunctional::zero(1), std::move(j), make_vector({f}));
  p.set_closed_form_omega([a, omega](const VhiProblem& prob, double eps) -> std::optional<IntervalSet> {
    return omega(a, prob.f()(0), eps);
  });
  return p;
}

}  // namespace

VhiProblem example1_problem(double f, double a) {
  return scalar_problem(a == 1.0 ? "example1" : fmt::format("example1[a={}]", a), f, a, ex1_functional(),
                        &ex1_omega_scaled);
}

VhiProblem example2_problem(double f, double a) {
  return scalar_problem(a == 1.0 ? "example2" : fmt::format("example2[a={}]", a), f, a, ex2_functional(),
                        &ex2_omega_scaled);
}

}  // namespace vhi::examples
