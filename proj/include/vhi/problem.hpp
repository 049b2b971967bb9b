#pragma once

#include "vhi/clarke.hpp"
#include "vhi/interval.hpp"
#include "vhi/space.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vhi {

class InfeasiblePointError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Closed constraint set K given by membership, projection and a sampler.
struct ConstraintSet {
  std::string name;
  std::function<bool(const Vector&)> contains;
  std::function<Vector(const Vector&)> project;
  std::function<std::vector<Vector>(std::size_t count, std::uint64_t seed)> sample_feasible;
  bool is_convex = true;
  bool is_closed = true;
  bool is_whole_space = false;

  /// K = R^dim. The sampler draws a Halton cloud in [-radius, radius]^dim.
  static ConstraintSet whole_space(int dim, double sample_radius = 10.0);
  /// K = {v : lo <= v <= hi}; infinite entries are absent bounds. The sampler
  /// draws from the box intersected with [-sample_radius, sample_radius]^dim.
  static ConstraintSet box(std::vector<double> lo, std::vector<double> hi, double sample_radius = 10.0);
};

/// A : X -> X* with an optional declared strong-monotonicity constant.
struct OperatorA {
  std::string name;
  std::function<Vector(const Vector&)> apply;
  std::optional<double> m_A;
  std::optional<double> lipschitz;  ///< declared Lipschitz bound, if known
  bool is_pseudomonotone = true;    ///< declared flag

  static OperatorA scaled_identity(double scale);
  static OperatorA linear(Matrix M, std::optional<double> m_A = std::nullopt);
};

/// phi(eta, v), convex in v. Optional second-slot selections:
/// `subgradient(eta, v)` returns an element of the convex subdifferential of
/// phi(eta, .) at v; `prox(eta, v, rho)` returns
/// argmin_w rho * phi(eta, w) + 0.5 |w - v|^2.
struct BiFunctional {
  std::string name;
  std::function<double(const Vector& eta, const Vector& v)> value;
  std::function<Vector(const Vector& eta, const Vector& v)> subgradient;
  std::function<Vector(const Vector& eta, const Vector& v, double rho)> prox;
  std::optional<double> alpha_phi;
  bool convex_in_second = true;
  bool limsup_condition = true;  ///< declared continuity flag of phi(u,v) - phi(u,u)
  bool is_zero = false;

  static BiFunctional zero(int dim);
  /// phi(u, v) = <L u, v>.
  static BiFunctional linear_pairing(std::function<Vector(const Vector&)> L, int dim);
};

class VhiProblem;

/// Exact residual evaluator for problems with closed-form optimality structure.
using ResidualHook = std::function<double(const VhiProblem&, const Vector&)>;
/// Closed-form Omega(eps) for registered one-dimensional problems.
using OmegaHook = std::function<std::optional<IntervalSet>(const VhiProblem&, double eps)>;

/// Data bundle (K, A, phi, j, f) of the inequality
///   <A u, v - u> + phi(u, v) - phi(u, u) + j0(u; v - u) >= <f, v - u>  for all v in K.
class VhiProblem {
public:
  VhiProblem(std::string name, int dim, ConstraintSet K, OperatorA A, BiFunctional phi,
             LipschitzFunctional j, Vector f);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] SpaceDescriptor space() const { return SpaceDescriptor(dim_); }
  [[nodiscard]] const ConstraintSet& K() const { return K_; }
  [[nodiscard]] const OperatorA& A() const { return A_; }
  [[nodiscard]] const BiFunctional& phi() const { return phi_; }
  [[nodiscard]] const LipschitzFunctional& j() const { return j_; }
  [[nodiscard]] const Vector& f() const { return f_; }

  [[nodiscard]] const ResidualHook& exact_residual() const { return exact_residual_; }
  [[nodiscard]] const OmegaHook& closed_form_omega() const { return closed_form_omega_; }

  [[nodiscard]] VhiProblem with_f(Vector f) const;
  /// Replacing phi or j drops the exact-residual and closed-form hooks, which
  /// were derived from the old data.
  [[nodiscard]] VhiProblem with_phi(BiFunctional phi) const;
  [[nodiscard]] VhiProblem with_j(LipschitzFunctional j) const;
  [[nodiscard]] VhiProblem with_name(std::string name) const;

  void set_exact_residual(ResidualHook hook) { exact_residual_ = std::move(hook); }
  void set_closed_form_omega(OmegaHook hook) { closed_form_omega_ = std::move(hook); }

  void require_feasible(const Vector& u, const char* where) const;

private:
  std::string name_;
  int dim_;
  ConstraintSet K_;
  OperatorA A_;
  BiFunctional phi_;
  LipschitzFunctional j_;
  Vector f_;
  ResidualHook exact_residual_;
  OmegaHook closed_form_omega_;
};

/// <A u - f, v - u> + phi(u, v) - phi(u, u) + j0(u; v - u).
/// u solves the inequality iff gap(u, v) >= 0 for every feasible v.
/// Throws InfeasiblePointError when u or v lies outside K.
double gap(const VhiProblem& problem, const Vector& u, const Vector& v);

/// m_A - alpha_phi - alpha_j when all three constants are declared.
/// A zero phi counts as alpha_phi = 0.
std::optional<double> smallness_margin(const VhiProblem& problem);

/// A(u) + xi(u) + eta(u) - f with xi a Clarke subgradient selection of j and
/// eta a second-slot subgradient of phi(u, .) at u. Throws std::logic_error
/// when a selection is missing.
Vector selection_residual_vector(const VhiProblem& problem, const Vector& u);

/// Minimum over sampled pairs of <A v1 - A v2, v1 - v2> / |v1 - v2|^2.
double sampled_monotonicity_constant(const OperatorA& A, const std::vector<std::pair<Vector, Vector>>& pairs);
/// Maximum over sampled pairs of |T v1 - T v2| / |v1 - v2|.
double sampled_lipschitz_constant(const std::function<Vector(const Vector&)>& T,
                                  const std::vector<std::pair<Vector, Vector>>& pairs);
/// Maximum over sampled quadruples (eta1, eta2, v1, v2) of
/// [phi(eta1,v2) - phi(eta1,v1) + phi(eta2,v1) - phi(eta2,v2)] / (|eta1-eta2| |v1-v2|).
double sampled_alpha_phi(const BiFunctional& phi, const std::vector<std::array<Vector, 4>>& quads);
/// Largest midpoint-convexity defect of v -> phi(eta, v) over sampled chords.
double midpoint_convexity_defect(const BiFunctional& phi, const Vector& eta,
                                 const std::vector<std::pair<Vector, Vector>>& chords);

/// Deterministic pseudo-random pairs inside [-radius, radius]^dim.
std::vector<std::pair<Vector, Vector>> random_pairs(int dim, std::size_t count, double radius,
                                                    std::uint64_t seed);

}  // namespace vhi
