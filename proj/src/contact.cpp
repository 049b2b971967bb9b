#include "vhi/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace vhi::contact {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pos(double r) { return r > 0.0 ? r : 0.0; }

void need_params(const std::string& law, const std::vector<double>& params, std::size_t n) {
  if (params.size() != n)
    throw std::invalid_argument(fmt::format("law '{}' takes {} parameter(s), got {}", law, n, params.size()));
  for (double x : params)
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument(fmt::format("law '{}': parameters must be finite and >= 0", law));
}

ScalarLaw linear_law(const std::string& kind, const std::vector<double>& params) {
  need_params(kind, params, 1);
  const double c = params[0];
  return {"linear", params, [c](double r) { return c * pos(r); },
          [c](double r) { return 0.5 * c * pos(r) * pos(r); }, c, true};
}

ScalarLaw capped_law(const std::string& kind, const std::vector<double>& params) {
  need_params(kind, params, 2);
  const double c = params[0], cap = params[1];
  if (!(c > 0.0)) throw std::invalid_argument("law 'capped': slope must be positive");
  const double knee = cap / c;
  return {"capped", params, [c, cap](double r) { return std::min(c * pos(r), cap); },
          [c, cap, knee](double r) {
            if (r <= 0.0) return 0.0;
            if (r <= knee) return 0.5 * c * r * r;
            return 0.5 * cap * knee + cap * (r - knee);
          },
          c, true};
}

std::vector<double> node_block(const Vector& v, int node, int dpn) {
  return {v.data() + node * dpn, v.data() + (node + 1) * dpn};
}

}  // namespace

ScalarLaw compliance_law(const std::string& name, const std::vector<double>& params) {
  if (name == "linear") return linear_law(name, params);
  if (name == "capped") return capped_law(name, params);
  if (name == "hump") {
    need_params(name, params, 2);
    const double c = params[0], r0 = params[1];
    if (!(c > 0.0) || !(r0 > 0.0)) throw std::invalid_argument("law 'hump': parameters must be positive");
    auto value = [c, r0](double r) {
      if (r <= 0.0) return 0.0;
      if (r <= r0) return c * r;
      if (r <= 1.5 * r0) return c * (2.0 * r0 - r);
      return 0.5 * c * r0;
    };
    auto q = [c, r0](double r) {
      if (r <= 0.0) return 0.0;
      if (r <= r0) return 0.5 * c * r * r;
      const double top = 0.5 * c * r0 * r0;
      if (r <= 1.5 * r0) return top + c * (2.0 * r0 * (r - r0) - 0.5 * (r * r - r0 * r0));
      const double shoulder = top + c * (r0 * r0 - 0.5 * (2.25 * r0 * r0 - r0 * r0));
      return shoulder + 0.5 * c * r0 * (r - 1.5 * r0);
    };
    return {"hump", params, value, q, c, false};
  }
  throw std::invalid_argument(fmt::format("unknown compliance law '{}' (known: linear, capped, hump)", name));
}

ScalarLaw friction_law(const std::string& name, const std::vector<double>& params) {
  if (name == "linear") return linear_law(name, params);
  if (name == "capped") return capped_law(name, params);
  throw std::invalid_argument(fmt::format("unknown friction law '{}' (known: linear, capped)", name));
}

std::vector<std::string> compliance_law_names() { return {"linear", "capped", "hump"}; }
std::vector<std::string> friction_law_names() { return {"linear", "capped"}; }

Vector StrainSet::project(const Vector& e) const {
  switch (kind) {
    case Kind::Whole: return e;
    case Kind::Box: return e.cwiseMax(lo).cwiseMin(hi);
    case Kind::Ball: return project_ball(e, Vector::Zero(e.size()), radius);
  }
  return e;
}

bool StrainSet::contains(const Vector& e, double tol) const {
  switch (kind) {
    case Kind::Whole: return true;
    case Kind::Box: return (e.array() >= lo - tol).all() && (e.array() <= hi + tol).all();
    case Kind::Ball: return e.norm() <= radius + tol;
  }
  return false;
}

std::string StrainSet::describe() const {
  switch (kind) {
    case Kind::Whole: return "whole";
    case Kind::Box: return fmt::format("box[{}, {}]", lo, hi);
    case Kind::Ball: return fmt::format("ball({})", radius);
  }
  return "?";
}

double ContactModel::m_F() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(stiffness, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double ContactModel::smallness_margin() const {
  return m_F() - (F.lipschitz + p.lipschitz) * gamma_norm * gamma_norm;
}

Matrix ContactModel::elongation() const {
  const int n = dim(), dpn = dofs_per_node();
  Matrix E = Matrix::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    E(r, r) = 1.0;
    if (r >= dpn) E(r, r - dpn) = -1.0;
  }
  return E;
}

void ContactModel::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("contact model: " + msg); };
  if (nodes < 1) fail("nodes must be >= 1");
  if (tangential_dim < 1) fail("tangential_dim must be >= 1");
  const int n = dim();
  if (stiffness.rows() != n || stiffness.cols() != n) fail(fmt::format("stiffness must be {}x{}", n, n));
  if (!stiffness.allFinite()) fail("stiffness has non-finite entries");
  if ((stiffness - stiffness.transpose()).norm() > 1e-12 * std::max(1.0, stiffness.norm()))
    fail("stiffness is not symmetric");
  if (omega.size() != n) fail(fmt::format("omega needs {} entries", n));
  if (g.size() != nodes || k.size() != nodes) fail(fmt::format("g and k need {} entries", nodes));
  if (f0.size() != n || f2.size() != n) fail(fmt::format("f0 and f2 need {} entries", n));
  if (!omega.allFinite() || !g.allFinite() || !k.allFinite() || !f0.allFinite() || !f2.allFinite())
    fail("non-finite data");
  if ((omega.array() < 0.0).any()) fail("omega must be >= 0");
  for (int i = 0; i < nodes; ++i)
    if (!(g(i) >= 0.0 && g(i) <= k(i))) fail(fmt::format("node {}: need 0 <= g <= k", i));
  if (!(gamma_norm > 0.0)) fail("gamma_norm must be positive");
  switch (B.kind) {
    case StrainSet::Kind::Whole: break;
    case StrainSet::Kind::Box:
      if (!(B.lo <= 0.0 && 0.0 <= B.hi)) fail("B must contain 0");
      break;
    case StrainSet::Kind::Ball:
      if (!(B.radius >= 0.0)) fail("B radius must be >= 0");
      for (int i = 0; i < nodes; ++i) {
        const auto w = node_block(omega, i, dofs_per_node());
        if (std::any_of(w.begin(), w.end(), [&](double x) { return x != w.front(); }))
          fail(fmt::format("node {}: a ball B needs one omega value per node", i));
      }
      break;
  }
  if (!p.value || !p.antiderivative || !F.value) fail("missing constitutive law");
  for (double r : {-1.0, -0.1, 0.0}) {
    if (p.value(r) != 0.0) fail(fmt::format("p({}) must vanish", r));
    if (F.value(r) != 0.0) fail(fmt::format("F({}) must vanish", r));
  }
}

Matrix chain_stiffness(int nodes, int tangential_dim, double chain, double ground) {
  if (nodes < 1 || tangential_dim < 1) throw std::invalid_argument("chain_stiffness: bad sizes");
  const int dpn = 1 + tangential_dim, n = nodes * dpn;
  Matrix S = ground * Matrix::Identity(n, n);
  for (int i = 0; i + 1 < nodes; ++i)
    for (int d = 0; d < dpn; ++d) {
      const int a = i * dpn + d, b = a + dpn;
      S(a, a) += chain;
      S(b, b) += chain;
      S(a, b) -= chain;
      S(b, a) -= chain;
    }
  return S;
}

ContactModel make_model(int nodes, int tangential_dim, Matrix stiffness, StrainSet B, ScalarLaw p, ScalarLaw F,
                        Vector g, Vector k) {
  ContactModel m;
  m.nodes = nodes;
  m.tangential_dim = tangential_dim;
  m.stiffness = std::move(stiffness);
  m.B = B;
  m.omega = Vector::Ones(m.dim());
  m.p = std::move(p);
  m.F = std::move(F);
  m.g = std::move(g);
  m.k = std::move(k);
  m.f0 = Vector::Zero(m.dim());
  m.f2 = Vector::Zero(m.dim());
  return m;
}

double exact_residual(const ContactModel& model, const VhiProblem& problem, const Vector& u) {
  const int dpn = model.dofs_per_node();
  Vector x = problem.A().apply(u) - problem.f();
  for (int i = 0; i < model.nodes; ++i) {
    const int nu = model.normal_index(i);
    const double r = u(nu) - model.g(i);
    x(nu) += model.p.value(r);
    const double Fi = model.F.value(r);
    auto xt = x.segment(nu + 1, dpn - 1);
    const auto ut = u.segment(nu + 1, dpn - 1);
    const double un = ut.norm();
    if (un > 0.0) {
      xt += (Fi / un) * ut;
    } else {
      const double xn = xt.norm();
      xt *= xn > Fi ? (xn - Fi) / xn : 0.0;
    }
    if (u(nu) >= model.k(i)) x(nu) = std::max(x(nu), 0.0);
  }
  return x.norm();
}

VhiProblem assemble(const ContactModel& model, AssembleMode mode) {
  model.validate();
  const double mF = model.m_F();
  const double tol = 1e-12 * std::max(1.0, model.stiffness.norm());
  if (mode == AssembleMode::Strict) {
    if (!(mF > 0.0)) throw std::invalid_argument(fmt::format("contact model: stiffness not positive definite (m_F = {})", mF));
    const double margin = model.smallness_margin();
    if (!(margin > 0.0))
      throw SmallnessViolation(fmt::format("contact model: (L_F + L_p) |gamma|^2 >= m_F, margin {}", margin));
  } else if (mF < -tol) {
    throw std::invalid_argument(fmt::format("contact model: stiffness not positive semidefinite (m_F = {})", mF));
  }

  const int n = model.dim(), dpn = model.dofs_per_node(), N = model.nodes;
  const double g2 = model.gamma_norm * model.gamma_norm;

  std::vector<double> lo(static_cast<std::size_t>(n), -kInf), hi(static_cast<std::size_t>(n), kInf);
  for (int i = 0; i < N; ++i) hi[static_cast<std::size_t>(model.normal_index(i))] = model.k(i);
  ConstraintSet K = ConstraintSet::box(lo, hi, 2.0 * std::max(1.0, model.k.cwiseAbs().maxCoeff()));
  K.name = "contact_K";

  const Matrix E = model.elongation();
  OperatorA A;
  A.name = "contact_elasticity";
  A.apply = [S = model.stiffness, E, w = model.omega, B = model.B, N, dpn](const Vector& u) {
    if (u.size() != S.cols()) throw DimensionError("contact A: dimension mismatch");
    Vector e = E * u;
    Vector d(e.size());
    for (int i = 0; i < N; ++i) {
      const Vector blk = e.segment(i * dpn, dpn);
      d.segment(i * dpn, dpn) = blk - B.project(blk);
    }
    return (S * u + E.transpose() * w.cwiseProduct(d)).eval();
  };
  if (mF > 0.0) A.m_A = mF;
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(E.transpose() * E, Eigen::EigenvaluesOnly);
    const double sn = Eigen::SelfAdjointEigenSolver<Matrix>(model.stiffness, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .cwiseAbs()
                          .maxCoeff();
    A.lipschitz = sn + model.omega.maxCoeff() * es.eigenvalues().maxCoeff();
  }

  const ScalarLaw Flaw = model.F, plaw = model.p;
  const Vector g = model.g;
  BiFunctional phi;
  phi.name = fmt::format("friction[{}]", Flaw.name);
  phi.value = [Flaw, g, N, dpn](const Vector& eta, const Vector& v) {
    double s = 0.0;
    for (int i = 0; i < N; ++i)
      s += Flaw.value(eta(i * dpn) - g(i)) * v.segment(i * dpn + 1, dpn - 1).norm();
    return s;
  };
  phi.subgradient = [Flaw, g, N, dpn](const Vector& eta, const Vector& v) {
    Vector out = Vector::Zero(v.size());
    for (int i = 0; i < N; ++i) {
      const auto vt = v.segment(i * dpn + 1, dpn - 1);
      const double nrm = vt.norm();
      if (nrm > 0.0) out.segment(i * dpn + 1, dpn - 1) = (Flaw.value(eta(i * dpn) - g(i)) / nrm) * vt;
    }
    return out;
  };
  phi.prox = [Flaw, g, N, dpn](const Vector& eta, const Vector& v, double rho) {
    Vector out = v;
    for (int i = 0; i < N; ++i) {
      auto vt = out.segment(i * dpn + 1, dpn - 1);
      const double nrm = vt.norm();
      const double thr = rho * Flaw.value(eta(i * dpn) - g(i));
      vt *= nrm > thr ? (nrm - thr) / nrm : 0.0;
    }
    return out;
  };
  phi.alpha_phi = Flaw.lipschitz * g2;

  LipschitzFunctional j;
  j.name = fmt::format("compliance[{}]", plaw.name);
  j.value = [plaw, g, N, dpn](const Vector& v) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += plaw.antiderivative(v(i * dpn) - g(i));
    return s;
  };
  j.clarke_dd = [plaw, g, N, dpn](const Vector& u, const Vector& w) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += plaw.value(u(i * dpn) - g(i)) * w(i * dpn);
    return s;
  };
  j.subgradient = [plaw, g, N, dpn](const Vector& u) {
    Vector out = Vector::Zero(u.size());
    for (int i = 0; i < N; ++i) out(i * dpn) = plaw.value(u(i * dpn) - g(i));
    return out;
  };
  j.alpha_j = plaw.lipschitz * g2;
  j.regular = true;

  VhiProblem prob(fmt::format("contact[N={}]", N), n, std::move(K), std::move(A), std::move(phi), std::move(j),
                  model.f0 + model.f2);
  prob.set_exact_residual([model](const VhiProblem& pr, const Vector& u) { return exact_residual(model, pr, u); });
  return prob;
}

std::pair<double, double> gap_perturbation_bounds(const ContactModel& model, const Vector& g_n) {
  if (g_n.size() != model.nodes) throw DimensionError("gap_perturbation_bounds: g_n has the wrong size");
  for (int i = 0; i < model.nodes; ++i)
    if (!(g_n(i) >= 0.0 && g_n(i) <= model.k(i)))
      throw std::invalid_argument(fmt::format("gap_perturbation_bounds: node {} violates 0 <= g_n <= k", i));
  const double d = model.gamma_norm * (g_n - model.g).norm();
  return {model.F.lipschitz * d, model.p.lipschitz * d};
}

PerturbationSchedule contact_schedule(const ContactModel& model, const std::vector<Vector>& g_n,
                                      const std::vector<Vector>& f0_n) {
  const std::size_t steps = std::max(g_n.size(), f0_n.size());
  if ((!g_n.empty() && g_n.size() != steps) || (!f0_n.empty() && f0_n.size() != steps))
    throw std::invalid_argument("contact_schedule: gap and load sequences differ in length");
  PerturbationSchedule s{assemble(model), {}, {}, {}};
  for (std::size_t n = 0; n < steps; ++n) {
    ContactModel m = model;
    if (!g_n.empty()) m.g = g_n[n];
    if (!f0_n.empty()) m.f0 = f0_n[n];
    const auto [b, c] = gap_perturbation_bounds(model, m.g);
    s.problems.push_back(assemble(m).with_name(fmt::format("contact[N={}][n={}]", model.nodes, n)));
    s.b_n.push_back(b);
    s.c_n.push_back(c);
  }
  return s;
}

PerturbationTable contact_convergence_study(const ContactModel& model, const std::vector<Vector>& g_n,
                                            const std::vector<Vector>& f0_n, const PointSolver& solver) {
  return perturbation_experiment(contact_schedule(model, g_n, f0_n), solver);
}

WitnessReport illposed_witness(const ContactModel& model, std::size_t budget) {
  model.validate();
  if (model.stiffness.cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("illposed_witness: stiffness must vanish");
  if ((model.f0 + model.f2).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("illposed_witness: loads must vanish");
  const VhiProblem prob = assemble(model, AssembleMode::Relaxed);
  const int n = model.dim(), dpn = model.dofs_per_node();
  const Matrix E = model.elongation();

  auto in_reduced = [&](const Vector& v) {
    if (!prob.K().contains(v)) return false;
    const Vector e = E * v;
    for (int i = 0; i < model.nodes; ++i) {
      if (v(model.normal_index(i)) > model.g(i)) return false;
      if (!model.B.contains(e.segment(i * dpn, dpn))) return false;
    }
    return true;
  };

  WitnessReport rep;
  rep.points.push_back(Vector::Zero(n));
  rep.residuals.push_back(exact_residual(model, prob, rep.points.front()));
  constexpr double kReach = 1e3;
  for (int idx = 0; idx < n && rep.points.size() <= budget; ++idx) {
    for (double sign : {1.0, -1.0}) {
      if (rep.points.size() > budget) break;
      Vector d = Vector::Zero(n);
      d(idx) = sign;
      double a = 0.0, b = kReach;
      if (!in_reduced(b * d)) {
        for (int k = 0; k < 200; ++k) {
          const double mid = 0.5 * (a + b);
          if (mid == a || mid == b) break;
          (in_reduced(mid * d) ? a : b) = mid;
        }
      } else {
        a = kReach;
      }
      if (!(a > 0.0)) continue;
      const Vector w = (0.5 * a) * d;
      const double r = exact_residual(model, prob, w);
      if (r > 1e-12) continue;
      rep.points.push_back(w);
      rep.residuals.push_back(r);
    }
  }
  if (rep.points.size() < 2)
    throw DegenerateWitnessError("illposed_witness: the reduced set collapses to {0} for this data");
  return rep;
}

}  // namespace vhi::contact
