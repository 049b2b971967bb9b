#pragma once

#include "vhi/problem.hpp"
#include "vhi/wellposed.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vhi {

/// A base problem and perturbed problems (phi_n, j_n, f_n) on the same K and A,
/// with declared bounds
///   phi_n(u,v) - phi_n(u,u) - phi(u,v) + phi(u,u) <= b_n |u - v|,
///   j_n0(u; v - u) - j0(u; v - u)                 <= c_n |u - v|.
struct PerturbationSchedule {
  VhiProblem base;
  std::vector<VhiProblem> problems;
  std::vector<double> b_n;
  std::vector<double> c_n;

  [[nodiscard]] std::size_t steps() const { return problems.size(); }
  /// |f_n - f|.
  [[nodiscard]] double df(std::size_t n) const;
};

/// Load-only schedule: phi_n = phi, j_n = j, b_n = c_n = 0.
PerturbationSchedule load_schedule(const VhiProblem& base, const std::vector<Vector>& f_n);
/// General schedule. Empty phi_n / j_n keep the base functionals.
PerturbationSchedule make_schedule(const VhiProblem& base, const std::vector<BiFunctional>& phi_n,
                                   const std::vector<LipschitzFunctional>& j_n, const std::vector<Vector>& f_n,
                                   std::vector<double> b_n, std::vector<double> c_n);

/// b_n + c_n + |f_n - f|. Throws std::out_of_range.
double epsilon_of_step(const PerturbationSchedule& schedule, std::size_t n);

class ScheduleViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Tests both bounds on `pairs` random pairs per step in [-radius, radius]^dim
/// and throws ScheduleViolation naming the step and offending pair.
void verify_schedule(const PerturbationSchedule& schedule, std::size_t pairs = 1000, double radius = 10.0,
                     std::uint64_t seed = 1, double tol = 1e-12);

struct PerturbationRow {
  std::size_t n = 0;
  double b_n = 0.0;
  double c_n = 0.0;
  double df_n = 0.0;
  double eps_n = 0.0;
  double error = 0.0;
  std::optional<double> bound;
  bool pass = true;  ///< error <= bound (+1e-9) when a bound exists
};

struct PerturbationTable {
  std::vector<PerturbationRow> rows;
  Vector reference;
  bool monotone = true;  ///< errors nonincreasing
  bool pass = false;     ///< last error <= 10 * last bound, or <= 1e-6 without a bound
};

/// Solves the base problem and every perturbed problem with `solver` (at
/// tolerance 0) and tabulates |u_n - u| against eps_n / margin.
/// Runs verify_schedule first unless `verify` is false. Solver exceptions
/// propagate.
PerturbationTable perturbation_experiment(const PerturbationSchedule& schedule, const PointSolver& solver,
                                          bool verify = true);

/// |points[n] - reference| for each point of an approximating sequence.
std::vector<double> sequence_errors(const ApproxSequence& seq, const Vector& reference);

struct ModulusRow {
  Vector f;
  Vector u;
  double modulus = 0.0;  ///< max over coordinate directions of |u(f + delta e) - u(f)| / delta
};

struct ModulusTable {
  std::vector<ModulusRow> rows;
  double max_modulus = 0.0;
  std::optional<double> lipschitz_bound;  ///< 1 / smallness margin when positive
  bool within_bound = true;
};

/// Finite-difference continuity moduli of f -> u(f) over `f_grid`.
/// `family(f)` builds the problem with load f.
ModulusTable solution_map_probe(const std::function<VhiProblem(const Vector&)>& family,
                                const std::vector<Vector>& f_grid, const PointSolver& solver, double delta = 1e-3);

}  // namespace vhi
