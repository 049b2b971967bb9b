#include "vhi/cli.hpp"

#include "vhi/contact.hpp"
#include "vhi/io.hpp"
#include "vhi/perturb.hpp"
#include "vhi/solvers.hpp"
#include "vhi/wellposed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

namespace vhi::cli {

namespace {

using config::ConfigError;
using config::Json;
using io::format_double;

constexpr std::array<double, 3> kDefaultGrid{-10.0, 10.0, 1e-4};
constexpr std::array<double, 3> kDefaultSolveGrid{-10.0, 10.0, 1e-3};

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  }
  if (used != s.size() || !std::isfinite(x)) throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string cell(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

ProbeOptions probe_of(const RunConfig& cfg) {
  ProbeOptions p;
  p.directions = cfg.directions;
  p.seed = cfg.seed;
  return p;
}

// Shells of radius 10^-6 .. 10^0.5 around `center`, four radii per decade.
CandidateStream shell_candidates(const VhiProblem& problem, const Vector& center, std::uint64_t seed) {
  return [&problem, center, seed] {
    std::vector<Vector> out{center};
    const auto dirs = unit_directions(problem.dim(), 64, seed);
    for (int k = -24; k <= 2; ++k) {
      const double r = std::pow(10.0, 0.25 * k);
      for (const auto& d : dirs) {
        const Vector v = problem.K().project(center + r * d);
        if (problem.K().contains(v)) out.push_back(v);
      }
    }
    return out;
  };
}

CandidateStream candidates_for(const VhiProblem& problem, const RunConfig& cfg) {
  if (problem.dim() == 1) {
    const auto g = cfg.grid.value_or(kDefaultGrid);
    return grid_candidates_1d(problem, g[0], g[1], g[2]);
  }
  const auto n = static_cast<std::size_t>(problem.dim());
  std::optional<Vector> center;
  const auto margin = smallness_margin(problem);
  if (margin && *margin > 0.0) {
    try {
      center = monotone_point_solver()(problem, 0.0);
    } catch (const std::exception&) {
    }
  }
  std::vector<CandidateStream> streams;
  if (center) streams.push_back(shell_candidates(problem, *center, cfg.seed));
  if (n <= 3) {
    const Vector c = center.value_or(Vector::Zero(problem.dim()));
    const double R = 2.0;
    const int per_axis = center ? (n == 2 ? 101 : 21) : (n == 2 ? 201 : 41);
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) lo[i] = c(static_cast<Eigen::Index>(i)) - R, hi[i] = c(static_cast<Eigen::Index>(i)) + R;
    streams.push_back(grid_candidates(problem, lo, hi, per_axis));
    streams.push_back(feasible_candidates(problem, 5000, cfg.seed));
  } else {
    streams.push_back(feasible_candidates(problem, 20000, cfg.seed));
  }
  return concat(std::move(streams));
}

std::vector<std::string> vector_cells(const Vector& v) {
  std::vector<std::string> out;
  for (int i = 0; i < v.size(); ++i) out.push_back(format_double(v(i)));
  return out;
}

std::vector<std::string> indexed(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(fmt::format("{}_{}", prefix, i));
  return out;
}

template <class T>
void append(std::vector<T>& a, const std::vector<T>& b) {
  a.insert(a.end(), b.begin(), b.end());
}

void write_svg(std::ostream* svg, const io::PlotSpec& spec, const std::vector<io::Series>& series) {
  if (svg) *svg << io::render_svg(spec, series);
}

PointSolver solver_for(const VhiProblem& problem, const RunConfig& cfg) {
  if (problem.dim() == 1) {
    const auto g = cfg.grid.value_or(kDefaultSolveGrid);
    return grid_point_solver(g[0], g[1], g[2]);
  }
  MonotoneOptions o;
  o.probe = probe_of(cfg);
  return monotone_point_solver(o);
}

io::CsvTable perturbation_csv(const PerturbationTable& t) {
  io::CsvTable csv({"n", "b_n", "c_n", "df_n", "eps_n", "error", "bound", "pass"});
  for (const auto& r : t.rows)
    csv.add_row({std::to_string(r.n), format_double(r.b_n), format_double(r.c_n), format_double(r.df_n),
                 format_double(r.eps_n), format_double(r.error), io::format_optional(r.bound), r.pass ? "1" : "0"});
  return csv;
}

void perturbation_plot(std::ostream* svg, const PerturbationTable& t, const std::string& title) {
  io::Series err{"error", {}}, bnd{"bound", {}};
  for (const auto& r : t.rows) {
    err.points.emplace_back(static_cast<double>(r.n), r.error);
    if (r.bound) bnd.points.emplace_back(static_cast<double>(r.n), *r.bound);
  }
  write_svg(svg, {title, "n", "|u_n - u|", false, true}, {err, bnd});
}

bool table_passes(const PerturbationTable& t) {
  return t.pass && std::all_of(t.rows.begin(), t.rows.end(), [](const auto& r) { return r.pass; });
}

struct Emitted {
  io::CsvTable table;
  RunOutcome outcome;
};

Emitted cmd_solve(const RunConfig& cfg, const VhiProblem& problem) {
  SolveReport rep;
  if (problem.dim() == 1) {
    const auto g = cfg.grid.value_or(kDefaultGrid);
    rep = solve_1d_grid(problem, g[0], g[1], g[2], probe_of(cfg));
  } else {
    MonotoneOptions o;
    o.tol = cfg.tol;
    o.probe = probe_of(cfg);
    rep = solve_strongly_monotone(problem, o);
    if (!rep.converged) throw SolverError(rep.message);
  }
  std::vector<std::string> cols{"component", "kind", "residual", "extent_lo", "extent_hi"};
  append(cols, indexed("u", problem.dim()));
  io::CsvTable csv(cols);
  for (std::size_t i = 0; i < rep.components.size(); ++i) {
    const auto& c = rep.components[i];
    std::vector<std::string> row{std::to_string(i), c.extent ? "interval" : "point", format_double(c.residual),
                                 c.extent ? format_double(c.extent->lo) : "", c.extent ? format_double(c.extent->hi) : ""};
    append(row, vector_cells(c.representative));
    csv.add_row(row);
  }
  csv.add_meta("method", rep.method);
  csv.add_meta("iterations", std::to_string(rep.iterations));
  csv.add_meta("tolerance", format_double(rep.tolerance));
  if (!rep.message.empty()) csv.add_meta("note", rep.message);
  RunOutcome out;
  out.exit_code = rep.components.empty() ? kExitFinding : kExitPass;
  out.summary = rep.components.empty() ? "no solution found"
                                       : fmt::format("{} solution component(s)", rep.components.size());
  return {std::move(csv), out};
}

Emitted cmd_omega(const RunConfig& cfg, const VhiProblem& problem) {
  io::CsvTable csv({"epsilon", "members_found", "diameter_lower", "diameter_upper", "omega_min", "omega_max"});
  const auto cands = candidates_for(problem, cfg);
  bool any_empty = false;
  for (double eps : cfg.eps) {
    const auto est = omega_diameter(problem, eps, cands, probe_of(cfg), cfg.tol);
    std::string lo, hi;
    if (problem.dim() == 1 && !est.members.empty()) {
      double a = est.members.front()(0), b = a;
      for (const auto& m : est.members) a = std::min(a, m(0)), b = std::max(b, m(0));
      lo = format_double(a);
      hi = format_double(b);
    }
    any_empty = any_empty || est.empty();
    csv.add_row({format_double(eps), std::to_string(est.members.size()), format_double(est.diameter_lower),
                 io::format_optional(est.diameter_upper), lo, hi});
  }
  return {std::move(csv), {any_empty ? kExitFinding : kExitPass, any_empty ? "empty Omega found" : "ok"}};
}

Emitted cmd_sweep(const RunConfig& cfg, const VhiProblem& problem, std::ostream* svg) {
  const auto res = diam_sweep(problem, cfg.eps, candidates_for(problem, cfg), probe_of(cfg), cfg.tol);
  io::CsvTable csv({"epsilon", "members_found", "diameter_lower", "diameter_upper", "verdict"});
  io::Series s{"diameter", {}};
  for (const auto& r : res.rows) {
    csv.add_row({format_double(r.epsilon), std::to_string(r.members_found), format_double(r.diameter_lower),
                 io::format_optional(r.diameter_upper), to_string(res.verdict)});
    s.points.emplace_back(r.epsilon, r.diameter_lower);
  }
  csv.add_meta("limit", format_double(res.limit));
  csv.add_meta("monotone", res.monotone ? "true" : "false");
  for (const auto& b : res.basis) csv.add_meta("basis", b);
  write_svg(svg, {fmt::format("diam Omega(eps): {}", problem.name()), "eps", "diameter", true, true}, {s});
  const bool ok = res.verdict == Verdict::WellPosedCandidate;
  return {std::move(csv), {ok ? kExitPass : kExitFinding, to_string(res.verdict)}};
}

Emitted cmd_certify(const RunConfig& cfg, const VhiProblem& problem) {
  io::CsvTable csv({"epsilon", "margin", "bound"});
  const auto margin = smallness_margin(problem);
  try {
    for (double eps : cfg.eps)
      csv.add_row({format_double(eps), io::format_optional(margin), format_double(certify_error(problem, eps))});
  } catch (const CertificateUnavailable& e) {
    csv.add_meta("finding", e.what());
    return {std::move(csv), {kExitFinding, e.what()}};
  }
  return {std::move(csv), {kExitPass, "certified"}};
}

Emitted cmd_perturb(const RunConfig& cfg, const VhiProblem& problem, std::ostream* svg) {
  if (cfg.steps < 1) throw ConfigError("field 'steps': must be >= 1");
  PerturbationTable t;
  if (config::is_contact(cfg.problem)) {
    const auto model = config::contact_model(cfg.problem);
    std::vector<Vector> g_n;
    for (int n = 0; n < cfg.steps; ++n) g_n.push_back(model.g + std::ldexp(1.0, -(n + 1)) * (model.k - model.g));
    MonotoneOptions o;
    t = contact::contact_convergence_study(model, g_n, {}, monotone_point_solver(o));
  } else {
    if (problem.dim() == 1) {
      const auto g = cfg.grid.value_or(kDefaultSolveGrid);
      const auto base = solve_1d_grid(problem, g[0], g[1], g[2], probe_of(cfg));
      if (!base.unique_point()) {
        io::CsvTable csv({"n", "b_n", "c_n", "df_n", "eps_n", "error", "bound", "pass"});
        csv.add_meta("finding", fmt::format("base problem has no unique solution ({} component(s))",
                                            base.components.size()));
        return {std::move(csv), {kExitFinding, "base problem has no unique solution"}};
      }
    }
    std::vector<Vector> f_n;
    for (int n = 0; n < cfg.steps; ++n) f_n.push_back(problem.f() + std::ldexp(1.0, -n) * problem.space().unit(0));
    t = perturbation_experiment(load_schedule(problem, f_n), solver_for(problem, cfg));
  }
  auto csv = perturbation_csv(t);
  csv.add_meta("monotone", t.monotone ? "true" : "false");
  perturbation_plot(svg, t, fmt::format("perturbation: {}", problem.name()));
  const bool ok = table_passes(t);
  return {std::move(csv), {ok ? kExitPass : kExitFinding, ok ? "PASS" : "FAIL"}};
}

Emitted cmd_equation_probe(const RunConfig& cfg, const VhiProblem& problem) {
  if (!problem.phi().is_zero || !problem.K().is_whole_space || !problem.j().has_subgradient())
    throw ConfigError("equation-probe: needs phi = 0, K = whole space and a subgradient selection of j");
  EquationOperator T;
  T.dim = problem.dim();
  T.name = problem.name();
  T.breakpoints = problem.j().breakpoints;
  T.T = [problem](const Vector& u) { return (problem.A().apply(u) + problem.j().subgradient(u)).eval(); };
  std::vector<Vector> samples;
  if (cfg.f_samples.empty()) samples.push_back(problem.f());
  for (double f : cfg.f_samples) {
    if (problem.dim() != 1) throw ConfigError("field 'fs': scalar loads need a one-dimensional problem");
    samples.push_back(make_vector({f}));
  }
  EquationProbeOptions o;
  if (problem.dim() == 1) {
    o.method = EquationMethod::Bisection1D;
    o.grid = cfg.grid.value_or(kDefaultSolveGrid);
  } else {
    o.method = EquationMethod::DampedIteration;
  }
  const auto rep = equation_wellposed_probe(T, samples, cfg.delta, 1e-6, o);
  std::vector<std::string> cols = indexed("f", T.dim);
  append(cols, indexed("u", T.dim));
  append(cols, {"modulus", "status"});
  io::CsvTable csv(cols);
  for (const auto& r : rep.rows) {
    auto row = vector_cells(r.f);
    append(row, r.u ? vector_cells(*r.u) : std::vector<std::string>(static_cast<std::size_t>(T.dim)));
    append(row, {format_double(r.modulus), cell(r.status)});
    csv.add_row(row);
  }
  csv.add_meta("verdict", to_string(rep.verdict));
  const bool ok = rep.verdict == ProbeVerdict::ContinuousCandidate;
  return {std::move(csv), {ok ? kExitPass : kExitFinding, to_string(rep.verdict)}};
}

Emitted cmd_contact_study(const RunConfig& cfg, std::ostream* svg) {
  if (cfg.steps < 1) throw ConfigError("field 'steps': must be >= 1");
  Json pc = cfg.problem;
  if (!config::is_contact(pc)) pc = Json{{"problem", "contact"}};
  const auto model = config::contact_model(pc);
  if (cfg.schedule != "gap" && cfg.schedule != "load" && cfg.schedule != "both")
    throw ConfigError(fmt::format("field 'schedule': expected gap, load or both, got '{}'", cfg.schedule));
  std::vector<Vector> g_n, f0_n;
  for (int n = 0; n < cfg.steps; ++n) {
    const double s = std::ldexp(1.0, -(n + 1));
    if (cfg.schedule != "load") g_n.push_back(model.g + s * (model.k - model.g));
    if (cfg.schedule != "gap") f0_n.push_back(model.f0 + s * Vector::Ones(model.dim()));
  }
  MonotoneOptions o;
  const auto t = contact::contact_convergence_study(model, g_n, f0_n, monotone_point_solver(o));
  auto csv = perturbation_csv(t);
  csv.add_meta("smallness_margin", format_double(model.smallness_margin()));
  csv.add_meta("monotone", t.monotone ? "true" : "false");
  perturbation_plot(svg, t, "contact convergence study");
  const bool ok = table_passes(t);
  return {std::move(csv), {ok ? kExitPass : kExitFinding, ok ? "PASS" : "FAIL"}};
}

Emitted cmd_illposed(const RunConfig& cfg) {
  Json pc = cfg.problem;
  if (!config::is_contact(pc)) pc = Json{{"problem", "contact-degenerate"}};
  const auto model = config::contact_model(pc);
  std::vector<std::string> cols{"point", "residual"};
  append(cols, indexed("u", model.dim()));
  io::CsvTable csv(cols);
  try {
    const auto rep = contact::illposed_witness(model);
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
      std::vector<std::string> row{std::to_string(i), format_double(rep.residuals[i])};
      append(row, vector_cells(rep.points[i]));
      csv.add_row(row);
    }
    return {std::move(csv), {kExitFinding, fmt::format("{} distinct zero-residual points", rep.points.size())}};
  } catch (const contact::DegenerateWitnessError& e) {
    csv.add_meta("note", e.what());
    return {std::move(csv), {kExitPass, e.what()}};
  }
}

}  // namespace

std::vector<std::string> command_names() {
  return {"solve", "omega", "diam-sweep", "certify", "perturb", "equation-probe", "contact-study", "illposed-demo"};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_number(part, "list"));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<double> parse_eps(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 2) {
    try {
      return decade_range(parse_number(parts[0], "eps"), parse_number(parts[1], "eps"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("field 'eps': {}", e.what()));
    }
  }
  if (parts.size() != 1) throw ConfigError(fmt::format("field 'eps': cannot parse '{}'", text));
  auto out = parse_list(text);
  for (double e : out)
    if (!(e > 0.0)) throw ConfigError("field 'eps': values must be positive");
  return out;
}

std::array<double, 3> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError(fmt::format("field 'grid': expected lo:hi:step, got '{}'", text));
  std::array<double, 3> g{parse_number(parts[0], "grid"), parse_number(parts[1], "grid"),
                          parse_number(parts[2], "grid")};
  if (!(g[0] < g[1]) || !(g[2] > 0.0)) throw ConfigError(fmt::format("field 'grid': empty grid '{}'", text));
  return g;
}

Json to_json(const RunConfig& cfg) {
  Json j{{"command", cfg.command},
         {"problem", config::normalize_problem(cfg.problem)},
         {"eps", cfg.eps},
         {"f_samples", cfg.f_samples},
         {"schedule", cfg.schedule},
         {"steps", cfg.steps},
         {"delta", cfg.delta},
         {"tol", cfg.tol},
         {"seed", cfg.seed},
         {"directions", cfg.directions}};
  j["grid"] = cfg.grid ? Json(*cfg.grid) : Json(nullptr);
  return j;
}

RunOutcome run(const RunConfig& cfg_in, std::ostream& out, std::ostream* svg) {
  RunConfig cfg = cfg_in;
  const auto names = command_names();
  if (std::find(names.begin(), names.end(), cfg.command) == names.end())
    throw ConfigError(fmt::format("field 'command': unknown command '{}'", cfg.command));
  if (cfg.eps.empty() && (cfg.command == "omega" || cfg.command == "diam-sweep")) cfg.eps = decade_range(1e-1, 1e-4);
  if (cfg.eps.empty() && cfg.command == "certify") throw ConfigError("field 'eps': certify needs --eps");
  if (!(cfg.tol > 0.0)) throw ConfigError("field 'tol': must be positive");
  if (!(cfg.delta > 0.0)) throw ConfigError("field 'delta': must be positive");

  const bool needs_problem = cfg.command != "contact-study" && cfg.command != "illposed-demo";
  std::optional<VhiProblem> problem;
  if (needs_problem) problem = config::build_problem(cfg.problem);

  Emitted e = [&]() -> Emitted {
    if (cfg.command == "solve") return cmd_solve(cfg, *problem);
    if (cfg.command == "omega") return cmd_omega(cfg, *problem);
    if (cfg.command == "diam-sweep") return cmd_sweep(cfg, *problem, svg);
    if (cfg.command == "certify") return cmd_certify(cfg, *problem);
    if (cfg.command == "perturb") return cmd_perturb(cfg, *problem, svg);
    if (cfg.command == "equation-probe") return cmd_equation_probe(cfg, *problem);
    if (cfg.command == "contact-study") return cmd_contact_study(cfg, svg);
    return cmd_illposed(cfg);
  }();

  std::ostringstream block;
  block << "# tool: " << kToolVersion << '\n';
  block << "# config: " << to_json(cfg).dump() << '\n';
  block << "# seed: " << cfg.seed << '\n';
  block << "# exit: " << e.outcome.exit_code << '\n';
  block << "# summary: " << cell(e.outcome.summary) << '\n';
  out << block.str();
  e.table.write(out);
  return e.outcome;
}

}  // namespace vhi::cli
