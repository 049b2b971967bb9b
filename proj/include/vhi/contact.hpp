#pragma once

// Discrete contact-node model: N nodes, each with one normal DOF u_nu and
// `tangential_dim` tangential DOFs u_tau, laid out node by node as
// [nu, tau_1, ..., tau_dt]. Displacements in metres, forces in newtons.
//
// Assembled inequality on X = R^{N (1 + dt)}:
//   K        = {v : v_nu <= k nodewise}
//   A u      = S u + E^T W (E u - P_B(E u))        (E: per-node elongation)
//   phi(u,v) = sum_i F(u_nu,i - g_i) |v_tau,i|
//   j(v)     = sum_i q(v_nu,i - g_i),  q' = p
//   f        = f0 + f2

#include "vhi/perturb.hpp"
#include "vhi/problem.hpp"
#include "vhi/solvers.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vhi::contact {

/// A scalar constitutive law r -> value(r), vanishing for r <= 0, with its
/// antiderivative from 0 and Lipschitz constant.
struct ScalarLaw {
  std::string name;
  std::vector<double> params;
  std::function<double(double)> value;
  std::function<double(double)> antiderivative;
  double lipschitz = 0.0;
  bool nondecreasing = true;
};

/// Normal compliance laws:
///   "linear" {c}:          c r+
///   "capped" {c, cap}:     min(c r+, cap)
///   "hump"   {c, r0}:      c r on [0, r0], c (2 r0 - r) on [r0, 1.5 r0], c r0 / 2 beyond (nonmonotone)
/// Throws std::invalid_argument for unknown names or bad parameters.
ScalarLaw compliance_law(const std::string& name, const std::vector<double>& params);
/// Friction bounds: "linear" {mu}: mu r+;  "capped" {mu, cap}: min(mu r+, cap).
ScalarLaw friction_law(const std::string& name, const std::vector<double>& params);
std::vector<std::string> compliance_law_names();
std::vector<std::string> friction_law_names();

/// Convex set B for the per-node elongation vector (length 1 + dt).
struct StrainSet {
  enum class Kind { Whole, Box, Ball };
  Kind kind = Kind::Whole;
  double lo = 0.0;      ///< box: every component in [lo, hi]
  double hi = 0.0;
  double radius = 0.0;  ///< ball centred at 0

  static StrainSet whole() { return {}; }
  static StrainSet box(double lo, double hi) { return {Kind::Box, lo, hi, 0.0}; }
  static StrainSet ball(double radius) { return {Kind::Ball, 0.0, 0.0, radius}; }

  [[nodiscard]] Vector project(const Vector& e) const;
  [[nodiscard]] bool contains(const Vector& e, double tol = 0.0) const;
  [[nodiscard]] std::string describe() const;
};

struct ContactModel {
  int nodes = 1;
  int tangential_dim = 1;
  Matrix stiffness;           ///< symmetric, on all DOFs [N/m]
  StrainSet B;
  Vector omega;               ///< weight per DOF, >= 0
  ScalarLaw p;                ///< normal compliance
  ScalarLaw F;                ///< friction bound
  Vector g;                   ///< gap per node [m]
  Vector k;                   ///< thickness bound per node [m]
  Vector f0;                  ///< body load per DOF [N]
  Vector f2;                  ///< surface traction per DOF [N]
  double gamma_norm = 1.0;

  [[nodiscard]] int dofs_per_node() const { return 1 + tangential_dim; }
  [[nodiscard]] int dim() const { return nodes * dofs_per_node(); }
  [[nodiscard]] int normal_index(int node) const { return node * dofs_per_node(); }

  /// Smallest eigenvalue of the stiffness.
  [[nodiscard]] double m_F() const;
  /// m_F - (L_F + L_p) gamma_norm^2.
  [[nodiscard]] double smallness_margin() const;
  /// Elongation map: node i gets u_i - u_{i-1}, node 0 gets u_0 (fixed support).
  [[nodiscard]] Matrix elongation() const;

  /// Throws std::invalid_argument naming the first broken data hypothesis
  /// (sizes, 0 in B, 0 <= g <= k, omega >= 0, laws vanishing on r <= 0,
  /// symmetric stiffness, per-node constant omega for a ball B).
  void validate() const;
};

/// Stiffness of a spring chain: `ground` on every DOF plus `chain` between
/// matching DOFs of neighbouring nodes.
Matrix chain_stiffness(int nodes, int tangential_dim, double chain, double ground);

/// Model with chain stiffness, zero loads, omega = 1, and the given laws.
ContactModel make_model(int nodes, int tangential_dim, Matrix stiffness, StrainSet B, ScalarLaw p, ScalarLaw F,
                        Vector g, Vector k);

class SmallnessViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class AssembleMode {
  Strict,   ///< SPD stiffness and positive smallness margin required
  Relaxed,  ///< positive semidefinite stiffness, no smallness requirement
};

/// Builds the inequality with declared m_A = m_F, alpha_phi = L_F gamma^2,
/// alpha_j = L_p gamma^2 and an exact residual hook.
/// Throws std::invalid_argument (bad data or non-SPD stiffness) or
/// SmallnessViolation in strict mode.
VhiProblem assemble(const ContactModel& model, AssembleMode mode = AssembleMode::Strict);

/// Closed-form residual dist(0, A u - f + d_2 phi(u, u) + dj(u) + N_K(u)).
double exact_residual(const ContactModel& model, const VhiProblem& problem, const Vector& u);

/// (L_F gamma |g_n - g|, L_p gamma |g_n - g|). Throws std::invalid_argument
/// when g_n breaks 0 <= g_n <= k or has the wrong size.
std::pair<double, double> gap_perturbation_bounds(const ContactModel& model, const Vector& g_n);

/// Perturbation schedule over gap and/or load sequences. An empty sequence
/// keeps the base value. Steps = max of the two lengths.
PerturbationSchedule contact_schedule(const ContactModel& model, const std::vector<Vector>& g_n,
                                      const std::vector<Vector>& f0_n);

/// perturbation_experiment on contact_schedule(model, g_n, f0_n).
PerturbationTable contact_convergence_study(const ContactModel& model, const std::vector<Vector>& g_n,
                                            const std::vector<Vector>& f0_n, const PointSolver& solver);

class DegenerateWitnessError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct WitnessReport {
  std::vector<Vector> points;     ///< 0 first, then nonzero members of the reduced set
  std::vector<double> residuals;  ///< exact residual of each point
};

/// For zero stiffness and zero loads, every point of
///   K~ = {v in K : E v in B nodewise, v_nu <= g}
/// solves the inequality. Walks the coordinate directions +e_nu, -e_nu,
/// +e_tau, -e_tau of each node in turn, takes half the largest feasible step
/// inside K~, and keeps up to `budget` nonzero witnesses, each verified at
/// exact residual <= 1e-12.
/// Throws std::invalid_argument when the stiffness or loads are nonzero and
/// DegenerateWitnessError when no nonzero member is found.
WitnessReport illposed_witness(const ContactModel& model, std::size_t budget = 4);

}  // namespace vhi::contact
