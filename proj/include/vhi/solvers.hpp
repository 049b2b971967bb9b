#pragma once

#include "vhi/interval.hpp"
#include "vhi/problem.hpp"
#include "vhi/wellposed.hpp"

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vhi {

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NoBracketError : public SolverError {
public:
  using SolverError::SolverError;
};

/// One connected piece of the computed solution set: a point, or an interval
/// in one dimension (`extent`), with `representative` its lowest-residual point.
struct SolutionComponent {
  Vector representative;
  double residual = 0.0;
  std::optional<Interval> extent;
};

struct SolveReport {
  std::vector<SolutionComponent> components;
  std::size_t iterations = 0;
  bool converged = false;
  std::string method;
  double tolerance = 0.0;
  std::string message;

  [[nodiscard]] std::vector<Vector> solutions() const;
  [[nodiscard]] bool unique_point() const { return components.size() == 1 && !components.front().extent; }
};

/// Exhaustive residual scan of a one-dimensional problem on lo, lo+step, ..., hi
/// plus the declared breakpoints of j.
///
/// Grid points with residual <= C * step are kept, where C is the largest
/// residual slope between neighbouring grid points that do not enclose a
/// breakpoint. Kept points are clustered (gap > 10 * step starts a new
/// cluster). A cluster wider than 10 * step is reported as an interval; a
/// narrower one is reported as a point, polished by bisection on the sign of
/// the selection residual when that lowers the residual.
/// Throws DimensionError (dim != 1) or std::invalid_argument (empty grid).
SolveReport solve_1d_grid(const VhiProblem& problem, double lo, double hi, double step,
                          const ProbeOptions& probe = {});

struct MonotoneOptions {
  std::optional<double> rho;  ///< step size; default 0.5 * margin / L^2
  double tol = 1e-10;         ///< stop once residual(u_k) <= tol; 0 iterates to stagnation
  std::size_t max_iter = 200000;
  double divergence_norm = 1e6;
  std::optional<Vector> start;  ///< default P_K(0)
  ProbeOptions probe;
  /// Called with (k, u_k, residual(u_k)) whenever the residual is evaluated.
  std::function<void(std::size_t, const Vector&, double)> observer;
};

/// Projected forward-backward iteration
///   u_{k+1} = P_K(prox_{rho phi(u_k, .)}(u_k - rho (A u_k + xi_k - f)))
/// with xi_k the subgradient selection of j. When phi has no prox, its
/// second-slot subgradient enters the forward step instead.
/// Throws std::invalid_argument when the smallness margin is not positive
/// and std::logic_error when a selection is missing. Non-convergence within
/// max_iter and divergence past `divergence_norm` are reported through
/// `converged = false` and `message`.
SolveReport solve_strongly_monotone(const VhiProblem& problem, const MonotoneOptions& options = {});

/// PointSolver backed by solve_strongly_monotone; throws SolverError when
/// the iteration does not converge.
PointSolver monotone_point_solver(MonotoneOptions options = {});
/// PointSolver backed by solve_1d_grid; throws SolverError unless the scan
/// finds exactly one point solution.
PointSolver grid_point_solver(double lo, double hi, double step);

struct EquationDecomposition {
  std::function<Vector(const Vector&)> A;
  std::function<Vector(const Vector&)> L;
  std::function<Vector(const Vector&)> P;
};

/// T = A + L + P on R^dim.
struct EquationOperator {
  int dim = 1;
  std::function<Vector(const Vector&)> T;
  std::optional<EquationDecomposition> decomposition;
  std::optional<double> m_T;  ///< declared strong-monotonicity constant of T
  std::string name = "T";
  std::vector<double> breakpoints;  ///< one-dimensional jump locations, passed to grid scans

  /// Builds T from the decomposition.
  static EquationOperator from_parts(int dim, EquationDecomposition parts, std::optional<double> m_T = std::nullopt);
  /// Largest |T(v) - A(v) - L(v) - P(v)| over the given points.
  [[nodiscard]] double decomposition_defect(const std::vector<Vector>& points) const;
};

enum class EquationMethod { Bisection1D, DampedIteration };

struct EquationOptions {
  std::optional<double> rho;
  std::size_t max_iter = 200000;
  double divergence_norm = 1e6;
  double bracket_limit = 1e6;  ///< bisection scans [-limit, limit] for a sign change
};

/// u with |T(u) - f| <= tol.
/// Bisection1D needs dim 1 and a sign change of T - f (NoBracketError
/// otherwise); a sign change across a jump of T that never meets the
/// tolerance raises SolverError. DampedIteration runs u <- u - rho (T u - f)
/// and raises SolverError on divergence or non-convergence.
SolveReport solve_equation(const EquationOperator& T, const Vector& f, EquationMethod method, double tol,
                           const EquationOptions& options = {});

/// |T(u) - f| <= eps.
bool ball_membership(const EquationOperator& T, const Vector& f, const Vector& u, double eps);

/// The inequality with K = R^dim, phi = 0, A + L as operator and
/// j0(u; v) = <P u, v>; without a decomposition T itself is the operator.
VhiProblem equation_problem(const EquationOperator& T, const Vector& f);

enum class ProbeVerdict { ContinuousCandidate, Suspect };
const char* to_string(ProbeVerdict v);

struct EquationProbeRow {
  Vector f;
  std::optional<Vector> u;
  double modulus = 0.0;  ///< max |u(f + delta e) - u(f)| / delta over coordinate directions
  std::string status;    ///< "ok" or the reason for suspicion
};

struct EquationProbeReport {
  std::vector<EquationProbeRow> rows;
  ProbeVerdict verdict = ProbeVerdict::ContinuousCandidate;
};

struct EquationProbeOptions {
  EquationMethod method = EquationMethod::Bisection1D;
  /// In one dimension, also scan the induced inequality on this grid
  /// (lo, hi, step) and flag non-unique solution sets.
  std::optional<std::array<double, 3>> grid;
  EquationOptions solve;
};

/// Finite continuity-modulus probe of T^{-1}. A sample is suspect when a
/// solve fails, the grid scan finds no or several solutions, or the modulus
/// exceeds 1/tol.
EquationProbeReport equation_wellposed_probe(const EquationOperator& T, const std::vector<Vector>& f_samples,
                                             double delta, double tol, const EquationProbeOptions& options = {});

}  // namespace vhi
