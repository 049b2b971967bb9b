#include "vhi/wellposed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace vhi {

namespace {

constexpr int kBisectionSteps = 60;
constexpr std::size_t kMaxPairwiseMembers = 4000;

std::vector<Vector> probe_directions(const VhiProblem& problem, const Vector& u, const ProbeOptions& probe) {
  const int n = problem.dim();
  std::vector<Vector> dirs = unit_directions(n, probe.directions, probe.seed);
  if (n == 1) return dirs;  // {+1, -1} already covers every direction
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  if (probe.informed) {
    try {
      const Vector r = selection_residual_vector(problem, u);
      const double rn = r.norm();
      if (rn > 0.0 && std::isfinite(rn)) dirs.push_back(-r / rn);
    } catch (const std::logic_error&) {
      // no selections: the blind directions have to do
    }
  }
  return dirs;
}

// Max of -gap(u, v) / |u - v| over the probe set, sharing A u - f and phi(u, u).
double max_defect_ratio(const VhiProblem& problem, const Vector& u, const ProbeOptions& probe) {
  const Vector r = problem.A().apply(u) - problem.f();
  const auto& phi = problem.phi();
  const double phi_uu = phi.is_zero ? 0.0 : phi.value(u, u);
  double best = 0.0;
  for (const auto& d : probe_directions(problem, u, probe)) {
    const Vector v = problem.K().project(u + probe.step * d);
    if (!problem.K().contains(v)) continue;
    const Vector w = v - u;
    const double n = w.norm();
    if (n == 0.0) continue;
    double g = inner(r, w) + problem.j().clarke_dd(u, w);
    if (!phi.is_zero) g += phi.value(u, v) - phi_uu;
    if (!std::isfinite(g)) throw NonFiniteError("residual: non-finite gap");
    best = std::max(best, -g / n);
  }
  return best;
}

double diameter_of(const std::vector<Vector>& members) {
  if (members.size() < 2) return 0.0;
  if (members.front().size() == 1) {
    double lo = members.front()(0), hi = lo;
    for (const auto& m : members) {
      lo = std::min(lo, m(0));
      hi = std::max(hi, m(0));
    }
    return hi - lo;
  }
  // Thin large clouds with a fixed stride so the pairwise pass stays bounded.
  std::vector<const Vector*> pts;
  const std::size_t stride = members.size() / kMaxPairwiseMembers + 1;
  for (std::size_t i = 0; i < members.size(); i += stride) pts.push_back(&members[i]);
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = i + 1; k < pts.size(); ++k) best = std::max(best, (*pts[i] - *pts[k]).norm());
  return best;
}

std::optional<double> closed_form_diameter(const VhiProblem& problem, double eps) {
  if (!problem.closed_form_omega()) return std::nullopt;
  const auto set = problem.closed_form_omega()(problem, eps);
  if (!set) return std::nullopt;
  return set->diameter();
}

struct Scan1D {
  std::vector<double> xs;   // sorted, distinct
  std::vector<double> res;  // residual at xs
};

Scan1D scan_1d(const VhiProblem& problem, const std::vector<Vector>& cands, const ProbeOptions& probe) {
  Scan1D s;
  s.xs.reserve(cands.size());
  for (const auto& c : cands)
    if (problem.K().contains(c)) s.xs.push_back(c(0));
  std::sort(s.xs.begin(), s.xs.end());
  s.xs.erase(std::unique(s.xs.begin(), s.xs.end()), s.xs.end());
  s.res.reserve(s.xs.size());
  for (double x : s.xs) s.res.push_back(residual(problem, make_vector({x}), probe));
  return s;
}

OmegaEstimate omega_from_scan(const VhiProblem& problem, const Scan1D& s, double eps, const ProbeOptions& probe,
                              double tol) {
  OmegaEstimate est;
  est.epsilon = eps;
  est.probes = s.xs.size();
  const double thr = eps + tol;
  auto member = [&](double x) { return residual(problem, make_vector({x}), probe) <= thr; };
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    const bool in = s.res[i] <= thr;
    if (in) est.members.push_back(make_vector({s.xs[i]}));
    if (i + 1 == s.xs.size()) break;
    const bool next_in = s.res[i + 1] <= thr;
    if (in == next_in) continue;
    double a = in ? s.xs[i] : s.xs[i + 1];  // member side
    double b = in ? s.xs[i + 1] : s.xs[i];
    for (int k = 0; k < kBisectionSteps; ++k) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      (member(mid) ? a : b) = mid;
      ++est.probes;
    }
    est.members.push_back(make_vector({a}));
  }
  est.diameter_lower = diameter_of(est.members);
  est.diameter_upper = closed_form_diameter(problem, eps);
  return est;
}

void require_positive_eps(double eps, const char* where) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument(fmt::format("{}: epsilon must be positive and finite, got {}", where, eps));
}

}  // namespace

double residual_sampled(const VhiProblem& problem, const Vector& u, const ProbeOptions& probe) {
  problem.require_feasible(u, "residual");
  return max_defect_ratio(problem, u, probe);
}

double residual(const VhiProblem& problem, const Vector& u, const ProbeOptions& probe) {
  if (probe.use_exact && problem.exact_residual()) {
    problem.require_feasible(u, "residual");
    return problem.exact_residual()(problem, u);
  }
  return residual_sampled(problem, u, probe);
}

bool omega_member(const VhiProblem& problem, const Vector& u, double eps, const ProbeOptions& probe, double tol) {
  if (!(eps >= 0.0)) throw std::invalid_argument("omega_member: epsilon must be >= 0");
  return residual(problem, u, probe) <= eps + tol;
}

CandidateStream grid_candidates_1d(const VhiProblem& problem, double lo, double hi, double step) {
  if (problem.dim() != 1) throw DimensionError("grid_candidates_1d: problem is not one-dimensional");
  if (!(lo < hi) || !(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument(fmt::format("grid_candidates_1d: bad grid {}:{}:{}", lo, hi, step));
  std::vector<double> bps = problem.j().breakpoints;
  return [lo, hi, step, bps] {
    std::vector<Vector> out;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    out.reserve(n + 1 + bps.size());
    for (std::size_t i = 0; i <= n; ++i) out.push_back(make_vector({lo + static_cast<double>(i) * step}));
    for (double b : bps)
      if (b >= lo && b <= hi) out.push_back(make_vector({b}));
    return out;
  };
}

CandidateStream grid_candidates(const VhiProblem& problem, const std::vector<double>& lo,
                                const std::vector<double>& hi, int per_axis) {
  const int n = problem.dim();
  if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
    throw DimensionError("grid_candidates: bound sizes differ from problem dimension");
  if (per_axis < 2) throw std::invalid_argument("grid_candidates: need at least 2 points per axis");
  ConstraintSet K = problem.K();
  return [K, lo, hi, per_axis, n] {
    std::vector<Vector> out;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      Vector x(n);
      for (int d = 0; d < n; ++d) {
        const auto k = static_cast<std::size_t>(d);
        x(d) = lo[k] + (hi[k] - lo[k]) * idx[k] / (per_axis - 1);
      }
      if (K.contains(x)) out.push_back(std::move(x));
      int d = 0;
      while (d < n && ++idx[static_cast<std::size_t>(d)] == per_axis) idx[static_cast<std::size_t>(d++)] = 0;
      if (d == n) break;
    }
    return out;
  };
}

CandidateStream feasible_candidates(const VhiProblem& problem, std::size_t count, std::uint64_t seed) {
  if (!problem.K().sample_feasible) throw std::invalid_argument("feasible_candidates: K has no sampler");
  ConstraintSet K = problem.K();
  return [K, count, seed] { return K.sample_feasible(count, seed); };
}

CandidateStream concat(std::vector<CandidateStream> streams) {
  return [streams = std::move(streams)] {
    std::vector<Vector> out;
    for (const auto& s : streams) {
      auto part = s();
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
  };
}

OmegaEstimate omega_diameter(const VhiProblem& problem, double eps, const CandidateStream& candidates,
                             const ProbeOptions& probe, double tol) {
  require_positive_eps(eps, "omega_diameter");
  const auto cands = candidates();
  if (problem.dim() == 1) return omega_from_scan(problem, scan_1d(problem, cands, probe), eps, probe, tol);
  OmegaEstimate est;
  est.epsilon = eps;
  for (const auto& c : cands) {
    if (!problem.K().contains(c)) continue;
    ++est.probes;
    if (residual(problem, c, probe) <= eps + tol) est.members.push_back(c);
  }
  est.diameter_lower = diameter_of(est.members);
  est.diameter_upper = closed_form_diameter(problem, eps);
  return est;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::WellPosedCandidate: return "WELL_POSED_CANDIDATE";
    case Verdict::NotWellPosed: return "NOT_WELL_POSED";
    case Verdict::EmptyOmega: return "EMPTY_OMEGA";
  }
  return "?";
}

SweepResult diam_sweep(const VhiProblem& problem, const std::vector<double>& epsilons,
                       const CandidateStream& candidates, const ProbeOptions& probe, double tol, double limit_tol) {
  if (epsilons.empty()) throw std::invalid_argument("diam_sweep: empty epsilon sequence");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    require_positive_eps(epsilons[i], "diam_sweep");
    if (i > 0 && epsilons[i] > epsilons[i - 1]) throw std::invalid_argument("diam_sweep: epsilons must decrease");
  }
  SweepResult out;
  const auto cands = candidates();
  std::vector<double> res;
  Scan1D scan;
  if (problem.dim() == 1) {
    scan = scan_1d(problem, cands, probe);
  } else {
    res.reserve(cands.size());
    for (const auto& c : cands) res.push_back(problem.K().contains(c) ? residual(problem, c, probe)
                                                                      : std::numeric_limits<double>::infinity());
  }
  bool any_empty = false;
  for (double eps : epsilons) {
    SweepRow row;
    row.epsilon = eps;
    if (problem.dim() == 1) {
      const auto est = omega_from_scan(problem, scan, eps, probe, tol);
      row.members_found = est.members.size();
      row.diameter_lower = est.diameter_lower;
      row.diameter_upper = est.diameter_upper;
    } else {
      std::vector<Vector> members;
      for (std::size_t i = 0; i < cands.size(); ++i)
        if (res[i] <= eps + tol) members.push_back(cands[i]);
      row.members_found = members.size();
      row.diameter_lower = diameter_of(members);
      row.diameter_upper = closed_form_diameter(problem, eps);
    }
    if (row.members_found == 0) any_empty = true;
    if (!out.rows.empty() && row.diameter_lower > out.rows.back().diameter_lower + 1e-12) out.monotone = false;
    out.rows.push_back(row);
  }
  out.limit = out.rows.back().diameter_lower;
  if (any_empty) {
    out.verdict = Verdict::EmptyOmega;
    out.basis.emplace_back("some Omega(eps) had no member: the solution set is empty or missed by the candidates");
  } else if (out.limit <= limit_tol) {
    out.verdict = Verdict::WellPosedCandidate;
    out.basis.emplace_back("Omega(eps) nonempty at every eps and diameters reach the limit tolerance");
  } else {
    out.verdict = Verdict::NotWellPosed;
    out.basis.emplace_back("diameter stays above the limit tolerance: two distinct approximating sequences exist");
  }
  const auto flag = [](bool b) { return b ? "declared" : "NOT declared"; };
  out.basis.push_back(fmt::format("K closed: {}", flag(problem.K().is_closed)));
  out.basis.push_back(fmt::format("A pseudomonotone: {}", flag(problem.A().is_pseudomonotone)));
  out.basis.push_back(fmt::format("phi limsup condition: {}", flag(problem.phi().limsup_condition)));
  out.basis.emplace_back("solution existence is not assumed; it is read from the member scan");
  return out;
}

std::vector<double> decade_range(double first, double last) {
  if (!(first > 0.0) || !(last > 0.0) || last > first)
    throw std::invalid_argument(fmt::format("decade_range: need first >= last > 0, got {}:{}", first, last));
  const double e_first = std::log10(first);
  const double e_last = std::log10(last);
  const auto count = static_cast<int>(std::lround(e_first - e_last));
  if (std::abs((e_first - e_last) - count) > 1e-9)
    throw std::invalid_argument("decade_range: endpoints must be a whole number of decades apart");
  const bool power_of_ten = std::abs(e_first - std::round(e_first)) < 1e-12;
  std::vector<double> out;
  for (int k = 0; k <= count; ++k)
    out.push_back(power_of_ten ? std::pow(10.0, std::round(e_first) - k) : first / std::pow(10.0, k));
  return out;
}

ApproxSequence make_approx_sequence(const VhiProblem& problem, const std::vector<double>& epsilons,
                                    ApproxStrategy strategy, const ApproxOptions& options) {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    require_positive_eps(epsilons[i], "make_approx_sequence");
    if (i > 0 && epsilons[i] > epsilons[i - 1])
      throw std::invalid_argument("make_approx_sequence: epsilons must be nonincreasing");
  }
  if ((strategy == ApproxStrategy::PerturbF || strategy == ApproxStrategy::SolverResidual) && !options.solver)
    throw StrategyUnavailable("make_approx_sequence: strategy needs a solver");
  if (strategy == ApproxStrategy::ClosedForm && !problem.closed_form_omega())
    throw StrategyUnavailable(fmt::format("make_approx_sequence: {} has no closed-form Omega", problem.name()));

  Vector dir = options.perturbation_direction.value_or(problem.space().unit(0));
  if (dir.size() != problem.dim() || !(dir.norm() > 0.0))
    throw std::invalid_argument("make_approx_sequence: bad perturbation direction");
  dir /= dir.norm();

  ApproxSequence seq;
  for (std::size_t n = 0; n < epsilons.size(); ++n) {
    const double eps = epsilons[n];
    Vector u;
    switch (strategy) {
      case ApproxStrategy::ClosedForm: {
        const auto set = problem.closed_form_omega()(problem, eps);
        if (!set || set->empty())
          throw std::runtime_error(fmt::format("make_approx_sequence: Omega({}) is empty", eps));
        const bool left = options.alternate_endpoints && n % 2 == 1;
        u = make_vector({left ? *set->min() : *set->max()});
        break;
      }
      case ApproxStrategy::PerturbF:
        u = options.solver(problem.with_f(problem.f() + eps * dir), 0.0);
        break;
      case ApproxStrategy::SolverResidual:
        u = options.solver(problem, eps);
        break;
    }
    if (!omega_member(problem, u, eps, options.probe, options.tol))
      throw std::runtime_error(
          fmt::format("make_approx_sequence: point {} failed membership at eps {}", n, eps));
    seq.epsilons.push_back(eps);
    seq.points.push_back(std::move(u));
  }
  return seq;
}

double certify_error(const VhiProblem& problem, double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("certify_error: epsilon must be >= 0");
  const auto margin = smallness_margin(problem);
  if (!margin) throw CertificateUnavailable(fmt::format("{}: constants not declared", problem.name()));
  if (!(*margin > 0.0))
    throw CertificateUnavailable(fmt::format("{}: smallness margin {} is not positive", problem.name(), *margin));
  return eps / *margin;
}

}  // namespace vhi
