#pragma once

#include "vhi/problem.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vhi {

/// How feasible comparison points v are generated around u.
///
/// Every probe is v = P_K(u + step * d) for a unit direction d from
/// `unit_directions(dim, directions, seed)`, the coordinate axes, and (when
/// `informed`) the steepest direction -r/|r| of the selection residual
/// r = A u + xi + eta - f. In one dimension the directions are exactly {+1, -1}.
struct ProbeOptions {
  std::size_t directions = 256;
  std::uint64_t seed = 0;
  double step = 1e-6;
  bool informed = true;
  bool use_exact = true;  ///< defer to the problem's exact-residual hook when present
};

/// Additive slack for membership tests, applied per unit distance |u - v|.
inline constexpr double kDefaultMembershipTol = 1e-10;

/// Smallest eps with u in Omega(eps):
///   sup over feasible v != u of [-gap(u, v)]_+ / |u - v|.
/// Uses the exact hook when present, otherwise the sampled lower estimate,
/// which is exact for one-dimensional problems with phi positively
/// homogeneous in its second slot around u. Throws InfeasiblePointError.
double residual(const VhiProblem& problem, const Vector& u, const ProbeOptions& probe = {});
/// The sampled estimate, ignoring any exact hook.
double residual_sampled(const VhiProblem& problem, const Vector& u, const ProbeOptions& probe = {});

/// gap(u, v) >= -(eps + tol) |u - v| for every probed v.
bool omega_member(const VhiProblem& problem, const Vector& u, double eps, const ProbeOptions& probe = {},
                  double tol = kDefaultMembershipTol);

struct OmegaEstimate {
  double epsilon = 0.0;
  std::vector<Vector> members;
  double diameter_lower = 0.0;
  std::optional<double> diameter_upper;
  std::size_t probes = 0;

  [[nodiscard]] bool empty() const { return members.empty(); }
};

/// Deterministic candidate points fed to the Omega machinery.
using CandidateStream = std::function<std::vector<Vector>()>;

/// lo, lo + step, ..., hi on the real line plus every declared breakpoint of j
/// that falls inside [lo, hi].
CandidateStream grid_candidates_1d(const VhiProblem& problem, double lo, double hi, double step);
/// Tensor grid with `per_axis` points per axis on [lo_i, hi_i], filtered by K.
CandidateStream grid_candidates(const VhiProblem& problem, const std::vector<double>& lo,
                                const std::vector<double>& hi, int per_axis);
/// `count` points from K's sampler.
CandidateStream feasible_candidates(const VhiProblem& problem, std::size_t count, std::uint64_t seed);
/// Concatenation of streams.
CandidateStream concat(std::vector<CandidateStream> streams);

/// Collects members of Omega(eps) from the candidates and reports the max
/// pairwise distance. In one dimension, boundaries between neighbouring
/// member and non-member candidates are refined by bisection; refined points
/// are verified members. diameter_upper comes from the closed-form hook.
OmegaEstimate omega_diameter(const VhiProblem& problem, double eps, const CandidateStream& candidates,
                             const ProbeOptions& probe = {}, double tol = kDefaultMembershipTol);

enum class Verdict { WellPosedCandidate, NotWellPosed, EmptyOmega };
const char* to_string(Verdict v);

struct SweepRow {
  double epsilon = 0.0;
  std::size_t members_found = 0;
  double diameter_lower = 0.0;
  std::optional<double> diameter_upper;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double limit = 0.0;           ///< diameter at the smallest eps
  bool monotone = true;         ///< diameters nonincreasing along the sweep
  Verdict verdict = Verdict::NotWellPosed;
  std::vector<std::string> basis;  ///< hypotheses each verdict rests on
};

/// Diameter table over a decreasing eps sequence. Verdict is
/// WellPosedCandidate iff Omega is nonempty at every eps and the final
/// diameter is <= limit_tol; EmptyOmega when some Omega(eps) had no member.
SweepResult diam_sweep(const VhiProblem& problem, const std::vector<double>& epsilons,
                       const CandidateStream& candidates, const ProbeOptions& probe = {},
                       double tol = kDefaultMembershipTol, double limit_tol = 1e-3);

/// Parses "1e-1:1e-4" into {1e-1, 1e-2, 1e-3, 1e-4} (one value per decade).
std::vector<double> decade_range(double first, double last);

struct ApproxSequence {
  std::vector<double> epsilons;
  std::vector<Vector> points;
};

enum class ApproxStrategy { PerturbF, ClosedForm, SolverResidual };

/// Solves `problem` to the given residual tolerance and returns the point.
/// A tolerance of 0 asks for the most accurate answer the solver can give.
using PointSolver = std::function<Vector(const VhiProblem&, double tol)>;

struct ApproxOptions {
  PointSolver solver;            ///< required for PerturbF and SolverResidual
  bool alternate_endpoints = false;  ///< ClosedForm: right, left, right, ... endpoints
  std::optional<Vector> perturbation_direction;  ///< PerturbF: defaults to e_1
  ProbeOptions probe;
  double tol = kDefaultMembershipTol;
};

class StrategyUnavailable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Builds u_n in Omega(eps_n) for each eps_n and verifies membership.
/// PerturbF solves with f replaced by f + eps_n * d (|d| = 1).
/// ClosedForm takes endpoints of the closed-form Omega(eps_n).
/// SolverResidual stops a solver at residual eps_n.
/// Throws StrategyUnavailable when the strategy has no means to run and
/// std::runtime_error if a produced point fails verification.
ApproxSequence make_approx_sequence(const VhiProblem& problem, const std::vector<double>& epsilons,
                                    ApproxStrategy strategy, const ApproxOptions& options = {});

class CertificateUnavailable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// eps / (m_A - alpha_phi - alpha_j): every point of Omega(eps) lies within
/// this distance of the unique solution. Throws CertificateUnavailable when
/// the margin is undeclared or not positive.
double certify_error(const VhiProblem& problem, double eps);

}  // namespace vhi
