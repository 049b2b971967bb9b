#pragma once

#include "vhi/config.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace vhi::cli {

inline constexpr const char* kToolVersion = "vhi 1.0.0";

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFinding = 2;

std::vector<std::string> command_names();

struct RunConfig {
  std::string command;
  config::Json problem = config::Json{{"problem", "example1"}};
  std::vector<double> eps;                    ///< omega, diam-sweep, certify
  std::optional<std::array<double, 3>> grid;  ///< one-dimensional grid lo, hi, step
  std::vector<double> f_samples;              ///< equation-probe loads (one-dimensional)
  std::string schedule = "both";              ///< contact-study: gap | load | both
  int steps = 8;
  double delta = 1e-3;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  std::size_t directions = 256;
  std::optional<std::string> svg_path;
};

/// "1e-1:1e-4" (one value per decade), "0.5,0.2" (list), or "0.2".
std::vector<double> parse_eps(const std::string& text);
/// "lo:hi:step".
std::array<double, 3> parse_grid(const std::string& text);
/// Comma-separated numbers.
std::vector<double> parse_list(const std::string& text);

/// Canonical JSON echo of the configuration (problem normalized).
config::Json to_json(const RunConfig& cfg);

struct RunOutcome {
  int exit_code = kExitPass;
  std::string summary;
};

/// Runs one command and writes its CSV (header block plus table) to `csv`.
/// When `svg` is given and the command has a curve, the plot is written there.
/// Throws on invalid configuration or solver failure.
RunOutcome run(const RunConfig& cfg, std::ostream& csv, std::ostream* svg = nullptr);

}  // namespace vhi::cli
