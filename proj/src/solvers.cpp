#include "vhi/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace vhi {

namespace {

constexpr double kClusterGapFactor = 10.0;
constexpr double kZeroResidual = 1e-9;
constexpr double kAccurateTol = 1e-13;
constexpr std::size_t kMaxGridPoints = 50'000'000;

bool encloses_breakpoint(const std::vector<double>& bps, double a, double b) {
  return std::any_of(bps.begin(), bps.end(), [&](double x) { return a <= x && x <= b; });
}

double signed_selection(const VhiProblem& problem, double x) {
  return selection_residual_vector(problem, make_vector({x}))(0);
}

// Bisects the sign change of the selection residual inside the neighbourhood
// of xs[i0..i1] and returns the lowest-residual point seen, or nullopt.
std::optional<std::pair<double, double>> polish_point(const VhiProblem& problem, const std::vector<double>& xs,
                                                      std::size_t i0, std::size_t i1, const ProbeOptions& probe) {
  if (!problem.j().has_subgradient() || (!problem.phi().is_zero && !problem.phi().subgradient)) return std::nullopt;
  const std::size_t lo = i0 == 0 ? 0 : i0 - 1;
  const std::size_t hi = std::min(xs.size() - 1, i1 + 1);
  const auto& bps = problem.j().breakpoints;
  for (std::size_t i = lo; i < hi; ++i) {
    double a = xs[i], b = xs[i + 1];
    double ga = signed_selection(problem, a), gb = signed_selection(problem, b);
    if (!(ga * gb <= 0.0)) continue;
    for (int k = 0; k < 200 && ga != 0.0; ++k) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      const double gm = signed_selection(problem, mid);
      if ((gm <= 0.0) == (ga <= 0.0)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
        gb = gm;
      }
    }
    std::vector<double> trial{a, b};
    for (double bp : bps)
      if (xs[i] <= bp && bp <= xs[i + 1]) trial.push_back(bp);
    std::optional<std::pair<double, double>> best;
    for (double x : trial) {
      const Vector v = make_vector({x});
      if (!problem.K().contains(v)) continue;
      const double r = residual(problem, v, probe);
      if (!best || r < best->second) best = std::make_pair(x, r);
    }
    return best;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Vector> SolveReport::solutions() const {
  std::vector<Vector> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.representative);
  return out;
}

SolveReport solve_1d_grid(const VhiProblem& problem, double lo, double hi, double step, const ProbeOptions& probe) {
  if (problem.dim() != 1) throw DimensionError("solve_1d_grid: problem is not one-dimensional");
  if (!(lo < hi) || !(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument(fmt::format("solve_1d_grid: empty grid {}:{}:{}", lo, hi, step));
  if ((hi - lo) / step > static_cast<double>(kMaxGridPoints))
    throw std::invalid_argument("solve_1d_grid: grid too fine");

  std::vector<double> xs;
  for (const auto& c : grid_candidates_1d(problem, lo, hi, step)())
    if (problem.K().contains(c)) xs.push_back(c(0));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.empty()) throw std::invalid_argument("solve_1d_grid: no feasible grid point");

  std::vector<double> res(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) res[i] = residual(problem, make_vector({xs[i]}), probe);

  const auto& bps = problem.j().breakpoints;
  double slope = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (encloses_breakpoint(bps, xs[i], xs[i + 1])) continue;
    slope = std::max(slope, std::abs(res[i + 1] - res[i]) / (xs[i + 1] - xs[i]));
  }

  SolveReport rep;
  rep.method = "grid_1d";
  rep.tolerance = std::max(slope * step, kAccurateTol);
  rep.iterations = xs.size();
  rep.converged = true;

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (res[i] <= rep.tolerance) kept.push_back(i);

  const double gap = kClusterGapFactor * step;
  std::size_t start = 0;
  while (start < kept.size()) {
    std::size_t end = start;
    while (end + 1 < kept.size() && xs[kept[end + 1]] - xs[kept[end]] <= gap) ++end;
    const std::size_t i0 = kept[start], i1 = kept[end];
    std::size_t best = i0;
    for (std::size_t m = start; m <= end; ++m)
      if (res[kept[m]] < res[best]) best = kept[m];
    SolutionComponent comp{make_vector({xs[best]}), res[best], std::nullopt};
    if (xs[i1] - xs[i0] > gap) {
      std::optional<std::size_t> first, last;
      for (std::size_t m = start; m <= end; ++m) {
        if (res[kept[m]] > kZeroResidual) continue;
        if (!first) first = kept[m];
        last = kept[m];
      }
      comp.extent = first ? Interval{xs[*first], xs[*last]} : Interval{xs[i0], xs[i1]};
    } else if (comp.residual > 0.0) {
      if (auto p = polish_point(problem, xs, i0, i1, probe); p && p->second < comp.residual) {
        comp.representative = make_vector({p->first});
        comp.residual = p->second;
      }
    }
    rep.components.push_back(std::move(comp));
    start = end + 1;
  }
  if (rep.components.empty()) rep.message = "no grid point within tolerance";
  else if (rep.components.size() > 1 || rep.components.front().extent) rep.message = "solution set is not a single point";
  return rep;
}

SolveReport solve_strongly_monotone(const VhiProblem& problem, const MonotoneOptions& options) {
  const auto margin = smallness_margin(problem);
  if (!margin || !(*margin > 0.0))
    throw std::invalid_argument(fmt::format("solve_strongly_monotone: {} has no positive smallness margin",
                                            problem.name()));
  if (!problem.j().has_subgradient())
    throw std::logic_error(fmt::format("solve_strongly_monotone: {} j has no subgradient selection", problem.name()));
  const auto& phi = problem.phi();
  const bool use_prox = !phi.is_zero && static_cast<bool>(phi.prox);
  const bool use_sub = !phi.is_zero && !use_prox && static_cast<bool>(phi.subgradient);
  if (!phi.is_zero && !use_prox && !use_sub)
    throw std::logic_error(fmt::format("solve_strongly_monotone: {} phi has neither prox nor subgradient",
                                       problem.name()));

  const int n = problem.dim();
  double rho = 0.0;
  if (options.rho) {
    rho = *options.rho;
    if (!(rho > 0.0)) throw std::invalid_argument("solve_strongly_monotone: rho must be positive");
  } else {
    double LA = problem.A().lipschitz.value_or(0.0);
    if (!problem.A().lipschitz)
      LA = sampled_lipschitz_constant(problem.A().apply, random_pairs(n, 200, 10.0, 7));
    const double L = std::max(LA + problem.j().alpha_j.value_or(0.0) + phi.alpha_phi.value_or(0.0), *margin);
    rho = 0.5 * *margin / (L * L);
  }
  const double tol = options.tol > 0.0 ? options.tol : kAccurateTol;
  const bool cheap_residual = n == 1 || static_cast<bool>(problem.exact_residual());

  SolveReport rep;
  rep.method = "forward_backward";
  rep.tolerance = tol;
  Vector u = options.start ? problem.K().project(*options.start) : problem.K().project(Vector::Zero(n));
  // A discontinuous selection of dj makes the explicit step oscillate around
  // a kink; when the residual stops improving, rho is halved and the
  // iteration restarts from the best point seen so far.
  constexpr std::size_t kStagnationChecks = 64;
  const double rho_floor = rho * 1e-12;
  Vector best = u;
  double best_r = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  double last_step = std::numeric_limits<double>::infinity();
  auto finish = [&](std::size_t k, std::string msg) {
    rep.iterations = k;
    rep.components.push_back({best, best_r, std::nullopt});
    rep.message = std::move(msg);
    return rep;
  };
  for (std::size_t k = 0;; ++k) {
    const bool check = cheap_residual || k % 16 == 0 || last_step <= rho * tol || k == options.max_iter;
    if (check) {
      const double r = residual(problem, u, options.probe);
      if (options.observer) options.observer(k, u, r);
      if (r < best_r) {
        if (r < best_r * (1.0 - 1e-6)) since_best = 0;
        best_r = r;
        best = u;
      }
      if (r <= tol) {
        rep.converged = true;
        return finish(k, "");
      }
      if (k >= options.max_iter) return finish(k, fmt::format("max_iter {} reached, residual {}", options.max_iter, best_r));
      if (++since_best > kStagnationChecks || last_step == 0.0) {
        rho *= 0.5;
        if (rho < rho_floor) return finish(k, fmt::format("stalled at residual {}", best_r));
        u = best;
        since_best = 0;
        last_step = std::numeric_limits<double>::infinity();
      }
    }
    Vector z = u - rho * (problem.A().apply(u) + problem.j().subgradient(u) - problem.f());
    if (use_sub) z -= rho * phi.subgradient(u, u);
    if (use_prox) z = phi.prox(u, z, rho);
    Vector next = problem.K().project(z);
    if (!next.allFinite() || next.norm() > options.divergence_norm) {
      rep.iterations = k + 1;
      rep.message = fmt::format("diverged: iterate norm exceeded {} at step {}", options.divergence_norm, k + 1);
      return rep;
    }
    last_step = (next - u).norm();
    u = std::move(next);
  }
}

PointSolver monotone_point_solver(MonotoneOptions options) {
  return [options](const VhiProblem& problem, double tol) {
    MonotoneOptions o = options;
    o.tol = tol;
    const auto rep = solve_strongly_monotone(problem, o);
    if (!rep.converged) throw SolverError(fmt::format("{}: {}", problem.name(), rep.message));
    return rep.components.front().representative;
  };
}

PointSolver grid_point_solver(double lo, double hi, double step) {
  return [lo, hi, step](const VhiProblem& problem, double tol) {
    const auto rep = solve_1d_grid(problem, lo, hi, step);
    if (!rep.unique_point())
      throw SolverError(fmt::format("{}: grid scan found {} components", problem.name(), rep.components.size()));
    const auto& c = rep.components.front();
    if (tol > 0.0 && c.residual > tol)
      throw SolverError(fmt::format("{}: grid residual {} above {}", problem.name(), c.residual, tol));
    return c.representative;
  };
}

EquationOperator EquationOperator::from_parts(int dim, EquationDecomposition parts, std::optional<double> m_T) {
  if (!parts.A || !parts.L || !parts.P) throw std::invalid_argument("EquationOperator: missing part");
  EquationOperator op;
  op.dim = dim;
  op.T = [parts](const Vector& v) { return (parts.A(v) + parts.L(v) + parts.P(v)).eval(); };
  op.decomposition = std::move(parts);
  op.m_T = m_T;
  return op;
}

double EquationOperator::decomposition_defect(const std::vector<Vector>& points) const {
  if (!decomposition) return 0.0;
  double worst = 0.0;
  for (const auto& v : points)
    worst = std::max(worst, (T(v) - decomposition->A(v) - decomposition->L(v) - decomposition->P(v)).norm());
  return worst;
}

namespace {

SolveReport bisection_1d(const EquationOperator& T, double f, double tol, const EquationOptions& options) {
  auto h = [&](double x) { return T.T(make_vector({x}))(0) - f; };
  SolveReport rep;
  rep.method = "bisection_1d";
  rep.tolerance = tol;
  auto finish = [&](double x, double r) {
    rep.converged = true;
    rep.components.push_back({make_vector({x}), r, std::nullopt});
    return rep;
  };
  constexpr int kScan = 2001;
  for (double limit = 1.0; limit <= options.bracket_limit; limit *= 10.0) {
    double prev_x = -limit;
    double prev_h = h(prev_x);
    for (int i = 1; i < kScan; ++i) {
      const double x = -limit + 2.0 * limit * i / (kScan - 1);
      const double hx = h(x);
      ++rep.iterations;
      if (std::abs(prev_h) <= tol) return finish(prev_x, std::abs(prev_h));
      if (prev_h * hx <= 0.0) {
        double a = prev_x, b = x, ha = prev_h;
        for (int k = 0; k < 400; ++k) {
          const double mid = 0.5 * (a + b);
          if (mid == a || mid == b) break;
          const double hm = h(mid);
          ++rep.iterations;
          if (std::abs(hm) <= tol) return finish(mid, std::abs(hm));
          if ((hm < 0.0) == (ha < 0.0)) {
            a = mid;
            ha = hm;
          } else {
            b = mid;
          }
        }
        const double hb = h(b);
        if (std::abs(hb) <= tol) return finish(b, std::abs(hb));
        throw SolverError(fmt::format("bisection_1d: T - f changes sign across a jump at u = {} (|T u - f| = {})",
                                      a, std::min(std::abs(ha), std::abs(hb))));
      }
      prev_x = x;
      prev_h = hx;
    }
  }
  throw NoBracketError(fmt::format("bisection_1d: no sign change of T - f on [-{0}, {0}]", options.bracket_limit));
}

SolveReport damped(const EquationOperator& T, const Vector& f, double tol, const EquationOptions& options) {
  const int n = T.dim;
  double rho = 0.0;
  if (options.rho) {
    rho = *options.rho;
  } else {
    const auto pairs = random_pairs(n, 200, 10.0, 11);
    OperatorA as_op{"T", T.T, std::nullopt, std::nullopt, true};
    const double m = T.m_T.value_or(sampled_monotonicity_constant(as_op, pairs));
    const double L = sampled_lipschitz_constant(T.T, pairs);
    if (!(m > 0.0)) throw SolverError("damped_iteration: T is not strongly monotone on the sample");
    rho = 0.5 * m / (L * L);
  }
  SolveReport rep;
  rep.method = "damped_iteration";
  rep.tolerance = tol;
  Vector u = Vector::Zero(n);
  for (std::size_t k = 0; k <= options.max_iter; ++k) {
    const Vector r = T.T(u) - f;
    const double rn = r.norm();
    if (rn <= tol) {
      rep.converged = true;
      rep.iterations = k;
      rep.components.push_back({u, rn, std::nullopt});
      return rep;
    }
    u -= rho * r;
    if (!u.allFinite() || u.norm() > options.divergence_norm)
      throw SolverError(fmt::format("damped_iteration: diverged at step {}", k + 1));
  }
  throw SolverError(fmt::format("damped_iteration: no convergence in {} steps", options.max_iter));
}

}  // namespace

SolveReport solve_equation(const EquationOperator& T, const Vector& f, EquationMethod method, double tol,
                           const EquationOptions& options) {
  if (!T.T) throw std::invalid_argument("solve_equation: operator has no map");
  if (f.size() != T.dim) throw DimensionError("solve_equation: f has the wrong dimension");
  require_finite(f, "solve_equation f");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_equation: tol must be positive");
  if (method == EquationMethod::Bisection1D) {
    if (T.dim != 1) throw DimensionError("solve_equation: bisection needs dimension 1");
    return bisection_1d(T, f(0), tol, options);
  }
  return damped(T, f, tol, options);
}

bool ball_membership(const EquationOperator& T, const Vector& f, const Vector& u, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("ball_membership: epsilon must be positive");
  require_same_dim(u, f, "ball_membership");
  return (T.T(u) - f).norm() <= eps;
}

VhiProblem equation_problem(const EquationOperator& T, const Vector& f) {
  OperatorA A;
  A.name = T.name;
  LipschitzFunctional j = zero_functional(T.dim);
  if (T.decomposition) {
    const auto parts = *T.decomposition;
    A.apply = [parts](const Vector& v) { return (parts.A(v) + parts.L(v)).eval(); };
    j = linear_clarke_functional("P", parts.P, T.dim);
  } else {
    A.apply = T.T;
    A.m_A = T.m_T;
  }
  j.breakpoints = T.breakpoints;
  return VhiProblem(T.name + "_equation", T.dim, ConstraintSet::whole_space(T.dim), std::move(A),
                    BiFunctional::zero(T.dim), std::move(j), f);
}

const char* to_string(ProbeVerdict v) {
  return v == ProbeVerdict::ContinuousCandidate ? "CONTINUOUS_CANDIDATE" : "SUSPECT";
}

EquationProbeReport equation_wellposed_probe(const EquationOperator& T, const std::vector<Vector>& f_samples,
                                             double delta, double tol, const EquationProbeOptions& options) {
  if (!(delta > 0.0) || !(tol > 0.0)) throw std::invalid_argument("equation_wellposed_probe: delta, tol must be > 0");
  EquationProbeReport out;
  const double solve_tol = std::min(tol, 1e-12);
  auto solve = [&](const Vector& f) -> Vector {
    return solve_equation(T, f, options.method, solve_tol, options.solve).components.front().representative;
  };
  for (const auto& f : f_samples) {
    EquationProbeRow row{f, std::nullopt, 0.0, "ok"};
    try {
      if (T.dim == 1 && options.grid) {
        const auto& g = *options.grid;
        const auto scan = solve_1d_grid(equation_problem(T, f), g[0], g[1], g[2]);
        if (scan.components.empty()) throw SolverError("grid scan: no solution");
        if (!scan.unique_point()) throw SolverError("grid scan: " + scan.message);
      }
      row.u = solve(f);
      for (int i = 0; i < T.dim; ++i) {
        Vector fd = f;
        fd(i) += delta;
        row.modulus = std::max(row.modulus, (solve(fd) - *row.u).norm() / delta);
      }
      if (row.modulus > 1.0 / tol) row.status = fmt::format("modulus {} exceeds 1/tol", row.modulus);
    } catch (const std::exception& e) {
      row.status = e.what();
    }
    if (row.status != "ok") out.verdict = ProbeVerdict::Suspect;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace vhi
