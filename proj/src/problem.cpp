#include "vhi/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace vhi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ConstraintSet ConstraintSet::whole_space(int dim, double sample_radius) {
  ConstraintSet K;
  K.name = "whole_space";
  K.contains = [dim](const Vector& v) { return v.size() == dim && v.allFinite(); };
  K.project = [dim](const Vector& v) {
    if (v.size() != dim) throw DimensionError("whole_space: dimension mismatch");
    return v;
  };
  K.sample_feasible = [dim, sample_radius](std::size_t count, std::uint64_t seed) {
    std::vector<Vector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const Vector h = halton_point(dim, seed * 1000003ULL + i + 1);
      out.push_back(sample_radius * (2.0 * h.array() - 1.0).matrix());
    }
    return out;
  };
  K.is_whole_space = true;
  return K;
}

ConstraintSet ConstraintSet::box(std::vector<double> lo, std::vector<double> hi, double sample_radius) {
  if (lo.size() != hi.size() || lo.empty()) throw DimensionError("ConstraintSet::box: bad bound sizes");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i])
      throw std::invalid_argument(fmt::format("ConstraintSet::box: inconsistent bounds at {}", i));
  ConstraintSet K;
  K.name = "box";
  const int dim = static_cast<int>(lo.size());
  K.contains = [lo, hi, dim](const Vector& v) {
    if (v.size() != dim || !v.allFinite()) return false;
    for (int i = 0; i < dim; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (v(i) < lo[k] || v(i) > hi[k]) return false;
    }
    return true;
  };
  K.project = [lo, hi](const Vector& v) { return project_interval_box(v, lo, hi); };
  K.sample_feasible = [lo, hi, dim, sample_radius](std::size_t count, std::uint64_t seed) {
    std::vector<Vector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const Vector h = halton_point(dim, seed * 1000003ULL + i + 1);
      Vector x(dim);
      for (int d = 0; d < dim; ++d) {
        const auto k = static_cast<std::size_t>(d);
        const double a = std::max(lo[k], -sample_radius);
        const double b = std::min(hi[k], sample_radius);
        x(d) = a <= b ? a + (b - a) * h(d) : std::clamp(0.0, lo[k], hi[k]);
      }
      out.push_back(std::move(x));
    }
    return out;
  };
  K.is_whole_space = std::all_of(lo.begin(), lo.end(), [](double x) { return x == -kInf; }) &&
                     std::all_of(hi.begin(), hi.end(), [](double x) { return x == kInf; });
  return K;
}

OperatorA OperatorA::scaled_identity(double scale) {
  OperatorA A;
  A.name = fmt::format("{}*identity", scale);
  A.apply = [scale](const Vector& v) { return (scale * v).eval(); };
  if (scale > 0.0) A.m_A = scale;
  A.lipschitz = std::abs(scale);
  return A;
}

OperatorA OperatorA::linear(Matrix M, std::optional<double> m_A) {
  OperatorA A;
  A.name = "linear";
  A.lipschitz = M.operatorNorm();
  A.apply = [M = std::move(M)](const Vector& v) {
    if (v.size() != M.cols()) throw DimensionError("OperatorA::linear: dimension mismatch");
    return (M * v).eval();
  };
  A.m_A = m_A;
  return A;
}

BiFunctional BiFunctional::zero(int dim) {
  BiFunctional phi;
  phi.name = "zero";
  phi.value = [](const Vector&, const Vector&) { return 0.0; };
  phi.subgradient = [dim](const Vector&, const Vector&) { return Vector::Zero(dim).eval(); };
  phi.prox = [](const Vector&, const Vector& v, double) { return v; };
  phi.alpha_phi = 0.0;
  phi.is_zero = true;
  return phi;
}

BiFunctional BiFunctional::linear_pairing(std::function<Vector(const Vector&)> L, int dim) {
  BiFunctional phi;
  phi.name = "linear_pairing";
  phi.value = [L](const Vector& eta, const Vector& v) { return inner(L(eta), v); };
  phi.subgradient = [L, dim](const Vector& eta, const Vector&) {
    Vector g = L(eta);
    if (g.size() != dim) throw DimensionError("linear_pairing: L has wrong dimension");
    return g;
  };
  phi.prox = [L](const Vector& eta, const Vector& v, double rho) { return (v - rho * L(eta)).eval(); };
  return phi;
}

VhiProblem::VhiProblem(std::string name, int dim, ConstraintSet K, OperatorA A, BiFunctional phi,
                       LipschitzFunctional j, Vector f)
    : name_(std::move(name)),
      dim_(dim),
      K_(std::move(K)),
      A_(std::move(A)),
      phi_(std::move(phi)),
      j_(std::move(j)),
      f_(std::move(f)) {
  if (dim_ < 1) throw DimensionError("VhiProblem: dimension must be >= 1");
  if (f_.size() != dim_)
    throw DimensionError(fmt::format("VhiProblem: f has dimension {}, expected {}", f_.size(), dim_));
  require_finite(f_, "VhiProblem f");
  if (!A_.apply || !phi_.value || !j_.clarke_dd || !K_.contains || !K_.project)
    throw std::invalid_argument("VhiProblem: missing component map");
}

VhiProblem VhiProblem::with_f(Vector f) const {
  VhiProblem p = *this;
  if (f.size() != dim_) throw DimensionError("with_f: dimension mismatch");
  require_finite(f, "with_f");
  p.f_ = std::move(f);
  return p;
}

VhiProblem VhiProblem::with_phi(BiFunctional phi) const {
  VhiProblem p = *this;
  p.phi_ = std::move(phi);
  p.exact_residual_ = nullptr;
  p.closed_form_omega_ = nullptr;
  return p;
}

VhiProblem VhiProblem::with_j(LipschitzFunctional j) const {
  VhiProblem p = *this;
  p.j_ = std::move(j);
  p.exact_residual_ = nullptr;
  p.closed_form_omega_ = nullptr;
  return p;
}

VhiProblem VhiProblem::with_name(std::string name) const {
  VhiProblem p = *this;
  p.name_ = std::move(name);
  return p;
}

void VhiProblem::require_feasible(const Vector& u, const char* where) const {
  if (u.size() != dim_) throw DimensionError(fmt::format("{}: dimension {} != {}", where, u.size(), dim_));
  if (!K_.contains(u)) throw InfeasiblePointError(fmt::format("{}: point outside K", where));
}

double gap(const VhiProblem& problem, const Vector& u, const Vector& v) {
  problem.require_feasible(u, "gap(u)");
  problem.require_feasible(v, "gap(v)");
  const Vector w = v - u;
  const Vector Au = problem.A().apply(u);
  return inner(Au - problem.f(), w) + problem.phi().value(u, v) - problem.phi().value(u, u) +
         problem.j().clarke_dd(u, w);
}

std::optional<double> smallness_margin(const VhiProblem& problem) {
  const auto& mA = problem.A().m_A;
  const std::optional<double> aphi = problem.phi().is_zero ? std::optional<double>(0.0) : problem.phi().alpha_phi;
  const auto& aj = problem.j().alpha_j;
  if (!mA || !aphi || !aj) return std::nullopt;
  return *mA - *aphi - *aj;
}

Vector selection_residual_vector(const VhiProblem& problem, const Vector& u) {
  if (!problem.j().has_subgradient())
    throw std::logic_error(fmt::format("{}: j has no subgradient selection", problem.name()));
  if (!problem.phi().is_zero && !problem.phi().subgradient)
    throw std::logic_error(fmt::format("{}: phi has no second-slot subgradient", problem.name()));
  Vector r = problem.A().apply(u) + problem.j().subgradient(u) - problem.f();
  if (!problem.phi().is_zero) r += problem.phi().subgradient(u, u);
  return r;
}

double sampled_monotonicity_constant(const OperatorA& A, const std::vector<std::pair<Vector, Vector>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("sampled_monotonicity_constant: empty sample");
  double best = kInf;
  for (const auto& [a, b] : pairs) {
    const Vector d = a - b;
    const double n2 = d.squaredNorm();
    if (n2 == 0.0) continue;
    best = std::min(best, inner(A.apply(a) - A.apply(b), d) / n2);
  }
  return best;
}

double sampled_lipschitz_constant(const std::function<Vector(const Vector&)>& T,
                                  const std::vector<std::pair<Vector, Vector>>& pairs) {
  double best = 0.0;
  for (const auto& [a, b] : pairs) {
    const double n = (a - b).norm();
    if (n == 0.0) continue;
    best = std::max(best, (T(a) - T(b)).norm() / n);
  }
  return best;
}

double sampled_alpha_phi(const BiFunctional& phi, const std::vector<std::array<Vector, 4>>& quads) {
  double best = 0.0;
  for (const auto& [e1, e2, v1, v2] : quads) {
    const double denom = (e1 - e2).norm() * (v1 - v2).norm();
    if (denom == 0.0) continue;
    const double num = phi.value(e1, v2) - phi.value(e1, v1) + phi.value(e2, v1) - phi.value(e2, v2);
    best = std::max(best, num / denom);
  }
  return best;
}

double midpoint_convexity_defect(const BiFunctional& phi, const Vector& eta,
                                 const std::vector<std::pair<Vector, Vector>>& chords) {
  double worst = 0.0;
  for (const auto& [a, b] : chords) {
    const Vector mid = 0.5 * (a + b);
    worst = std::max(worst, phi.value(eta, mid) - 0.5 * (phi.value(eta, a) + phi.value(eta, b)));
  }
  return worst;
}

std::vector<std::pair<Vector, Vector>> random_pairs(int dim, std::size_t count, double radius,
                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-radius, radius);
  std::vector<std::pair<Vector, Vector>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vector a(dim), b(dim);
    for (int d = 0; d < dim; ++d) a(d) = U(rng);
    for (int d = 0; d < dim; ++d) b(d) = U(rng);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

}  // namespace vhi
