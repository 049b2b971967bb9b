// Command-line driver: vhi <command> [problem] [options]

#include "vhi/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  using namespace vhi;
  CLI::App app{"Well-posedness diagnostics for variational-hemivariational inequalities"};
  app.set_version_flag("--version", cli::kToolVersion);

  std::string command, problem_pos, problem_name, config_path, eps_text, grid_text, fs_text, out_path, svg_path;
  std::vector<double> f_values;
  double a = 1.0;
  bool a_given = false;
  cli::RunConfig cfg;

  app.add_option("command", command, "solve | omega | diam-sweep | certify | perturb | equation-probe | "
                                     "contact-study | illposed-demo")
      ->required()
      ->check(CLI::IsMember(cli::command_names()));
  app.add_option("name", problem_pos, "registry name: identity, example1, example2, mono2, contact, "
                                          "contact-degenerate");
  app.add_option("--problem", problem_name, "registry name (alternative to the positional form)");
  app.add_option("--config", config_path, "JSON problem configuration file");
  app.add_option("--f", f_values, "load f (one value per dimension)")->delimiter(',');
  app.add_option_function<double>("--a", [&](double v) { a = v, a_given = true; }, "scale of A = a * identity");
  app.add_option("--eps", eps_text, "eps values: 1e-1:1e-4 (decades), list 0.5,0.2, or single value");
  app.add_option("--grid", grid_text, "one-dimensional grid lo:hi:step");
  app.add_option("--fs", fs_text, "equation-probe loads, comma separated");
  app.add_option("--schedule", cfg.schedule, "contact-study schedule: gap | load | both");
  app.add_option("--steps", cfg.steps, "perturbation steps");
  app.add_option("--delta", cfg.delta, "finite-difference load step");
  app.add_option("--tol", cfg.tol, "membership / solver tolerance");
  app.add_option("--seed", cfg.seed, "seed of the direction and candidate streams");
  app.add_option("--directions", cfg.directions, "probe directions per residual evaluation");
  app.add_option("--out", out_path, "CSV output file (default: stdout)");
  app.add_option("--svg", svg_path, "optional SVG plot file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitError;
  }

  try {
    cfg.command = command;
    config::Json problem = config_path.empty() ? config::Json::object() : config::load_file(config_path);
    if (problem_name.empty()) problem_name = problem_pos;
    if (!problem_name.empty()) problem["problem"] = problem_name;
    if (!problem.contains("problem"))
      problem["problem"] = (command == "contact-study")   ? "contact"
                           : (command == "illposed-demo") ? "contact-degenerate"
                                                          : "example1";
    if (!f_values.empty()) {
      const bool scalar = problem["problem"] != "identity";
      problem["f"] = scalar && f_values.size() == 1 ? config::Json(f_values.front()) : config::Json(f_values);
    }
    if (a_given) problem["a"] = a;
    cfg.problem = problem;
    if (!eps_text.empty()) cfg.eps = cli::parse_eps(eps_text);
    if (!grid_text.empty()) cfg.grid = cli::parse_grid(grid_text);
    if (!fs_text.empty()) cfg.f_samples = cli::parse_list(fs_text);

    std::ofstream csv_file, svg_file;
    if (!out_path.empty()) {
      csv_file.open(out_path);
      if (!csv_file) throw std::runtime_error("cannot write " + out_path);
    }
    if (!svg_path.empty()) {
      svg_file.open(svg_path);
      if (!svg_file) throw std::runtime_error("cannot write " + svg_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : csv_file;
    const auto outcome = cli::run(cfg, out, svg_path.empty() ? nullptr : &svg_file);
    std::cerr << command << ": " << outcome.summary << " (exit " << outcome.exit_code << ")\n";
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitError;
  }
}
