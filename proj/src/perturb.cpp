#include "vhi/perturb.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace vhi {

namespace {

std::string show(const Vector& v) {
  std::string s = "(";
  for (int i = 0; i < v.size(); ++i) s += fmt::format("{}{}", i ? ", " : "", v(i));
  return s + ")";
}

void check_step(const PerturbationSchedule& s, std::size_t n) {
  if (n >= s.steps())
    throw std::out_of_range(fmt::format("perturbation step {} outside schedule of {} steps", n, s.steps()));
}

}  // namespace

double PerturbationSchedule::df(std::size_t n) const {
  check_step(*this, n);
  return (problems[n].f() - base.f()).norm();
}

PerturbationSchedule load_schedule(const VhiProblem& base, const std::vector<Vector>& f_n) {
  PerturbationSchedule s{base, {}, {}, {}};
  for (std::size_t n = 0; n < f_n.size(); ++n) {
    s.problems.push_back(base.with_f(f_n[n]).with_name(fmt::format("{}[n={}]", base.name(), n)));
    s.b_n.push_back(0.0);
    s.c_n.push_back(0.0);
  }
  return s;
}

PerturbationSchedule make_schedule(const VhiProblem& base, const std::vector<BiFunctional>& phi_n,
                                   const std::vector<LipschitzFunctional>& j_n, const std::vector<Vector>& f_n,
                                   std::vector<double> b_n, std::vector<double> c_n) {
  const std::size_t steps = f_n.size();
  if (b_n.size() != steps || c_n.size() != steps || (!phi_n.empty() && phi_n.size() != steps) ||
      (!j_n.empty() && j_n.size() != steps))
    throw std::invalid_argument("make_schedule: sequences differ in length");
  for (std::size_t n = 0; n < steps; ++n)
    if (!(b_n[n] >= 0.0) || !(c_n[n] >= 0.0))
      throw std::invalid_argument(fmt::format("make_schedule: negative bound at step {}", n));
  PerturbationSchedule s{base, {}, std::move(b_n), std::move(c_n)};
  for (std::size_t n = 0; n < steps; ++n) {
    VhiProblem p = base.with_f(f_n[n]);
    if (!phi_n.empty()) p = p.with_phi(phi_n[n]);
    if (!j_n.empty()) p = p.with_j(j_n[n]);
    s.problems.push_back(p.with_name(fmt::format("{}[n={}]", base.name(), n)));
  }
  return s;
}

double epsilon_of_step(const PerturbationSchedule& schedule, std::size_t n) {
  check_step(schedule, n);
  return schedule.b_n[n] + schedule.c_n[n] + schedule.df(n);
}

void verify_schedule(const PerturbationSchedule& schedule, std::size_t pairs, double radius, std::uint64_t seed,
                     double tol) {
  const auto& phi = schedule.base.phi();
  const auto& j = schedule.base.j();
  for (std::size_t n = 0; n < schedule.steps(); ++n) {
    const auto& pn = schedule.problems[n];
    const auto sample = random_pairs(schedule.base.dim(), pairs, radius, seed + n);
    for (const auto& [u, v] : sample) {
      const double d = (u - v).norm();
      const double dphi = pn.phi().value(u, v) - pn.phi().value(u, u) - phi.value(u, v) + phi.value(u, u);
      const double scale = 1.0 + std::abs(phi.value(u, v)) + std::abs(phi.value(u, u));
      if (dphi > schedule.b_n[n] * d + tol * scale)
        throw ScheduleViolation(fmt::format("step {}: phi bound b_n = {} violated by {} at u = {}, v = {}", n,
                                            schedule.b_n[n], dphi - schedule.b_n[n] * d, show(u), show(v)));
      const double dj = pn.j().clarke_dd(u, v - u) - j.clarke_dd(u, v - u);
      if (dj > schedule.c_n[n] * d + tol * (1.0 + d))
        throw ScheduleViolation(fmt::format("step {}: j bound c_n = {} violated by {} at u = {}, v = {}", n,
                                            schedule.c_n[n], dj - schedule.c_n[n] * d, show(u), show(v)));
    }
  }
}

PerturbationTable perturbation_experiment(const PerturbationSchedule& schedule, const PointSolver& solver,
                                          bool verify) {
  if (!solver) throw std::invalid_argument("perturbation_experiment: no solver");
  if (verify) verify_schedule(schedule);
  PerturbationTable t;
  t.reference = solver(schedule.base, 0.0);
  const auto margin = smallness_margin(schedule.base);
  const bool certified = margin && *margin > 0.0;
  for (std::size_t n = 0; n < schedule.steps(); ++n) {
    PerturbationRow row;
    row.n = n;
    row.b_n = schedule.b_n[n];
    row.c_n = schedule.c_n[n];
    row.df_n = schedule.df(n);
    row.eps_n = epsilon_of_step(schedule, n);
    row.error = (solver(schedule.problems[n], 0.0) - t.reference).norm();
    if (certified) {
      row.bound = row.eps_n / *margin;
      row.pass = row.error <= *row.bound + 1e-9;
    }
    if (!t.rows.empty() && row.error > t.rows.back().error + 1e-12) t.monotone = false;
    t.rows.push_back(row);
  }
  if (!t.rows.empty()) {
    const auto& last = t.rows.back();
    t.pass = last.bound ? last.error <= 10.0 * *last.bound : last.error <= 1e-6;
  }
  return t;
}

std::vector<double> sequence_errors(const ApproxSequence& seq, const Vector& reference) {
  std::vector<double> out;
  out.reserve(seq.points.size());
  for (const auto& p : seq.points) out.push_back((p - reference).norm());
  return out;
}

ModulusTable solution_map_probe(const std::function<VhiProblem(const Vector&)>& family,
                                const std::vector<Vector>& f_grid, const PointSolver& solver, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("solution_map_probe: delta must be positive");
  ModulusTable t;
  for (const auto& f : f_grid) {
    const VhiProblem p = family(f);
    if (t.rows.empty()) {
      const auto margin = smallness_margin(p);
      if (margin && *margin > 0.0) t.lipschitz_bound = 1.0 / *margin;
    }
    ModulusRow row{f, solver(p, 0.0), 0.0};
    for (int i = 0; i < f.size(); ++i) {
      Vector fd = f;
      fd(i) += delta;
      row.modulus = std::max(row.modulus, (solver(family(fd), 0.0) - row.u).norm() / delta);
    }
    t.max_modulus = std::max(t.max_modulus, row.modulus);
    t.rows.push_back(std::move(row));
  }
  if (t.lipschitz_bound) t.within_bound = t.max_modulus <= *t.lipschitz_bound + 1e-9;
  return t;
}

}  // namespace vhi
