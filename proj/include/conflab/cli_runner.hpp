#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "conflab/quadrature.hpp"

namespace conflab {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIdentity = 2, kExitNoConvergence = 3 };

/// Raised for anything the user can fix in the configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run configuration. The file format is one `key = value` per line with `#`
/// comments; command-line flags override file values. Keys:
///
///   n, op, quad.scheme (auto|gauss|qmc), quad.nodes, quad.azimuth,
///   quad.qmc_points, tol, max_iter, seed, out_dir, format (json|csv),
///   suite (comma list of sl2, spectrum, tangential, self_adjoint,
///   commutator, associated; empty runs nothing), k, lmax, degree,
///   amplitude, length, rapidity, boost (comma list of axis:rapidity,
///   composed left to right; empty means a single boost along axis 0 with
///   the given rapidity).
struct RunConfig {
  int n = 5;
  std::string op = "gjms:1";
  QuadSpec quad;
  double tolerance = 1e-8;
  int max_iterations = 2000;
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  std::string format = "json";
  std::vector<std::string> suite = {"sl2", "spectrum", "tangential", "self_adjoint", "commutator", "associated"};
  int k = 1;
  int lmax = 6;
  /// Harmonic degree of the spectral model; 0 picks a per-operator default.
  int degree = 0;
  double amplitude = 0.05;
  double length = 7.0;
  double rapidity = 0.5;
  std::vector<std::pair<int, double>> boosts;

  /// Throws ConfigError on a bad key or value.
  void set(const std::string& key, const std::string& value);
  /// Throws ConfigError unless all tolerances are positive and the
  /// selector builds a handle for n.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

RunConfig load_config(const std::string& path, RunConfig base = {});
RunConfig parse_config_text(const std::string& text, RunConfig base = {});

/// Output directory: CONFLAB_OUT_DIR when set, else cfg.out_dir.
std::string output_directory(const RunConfig& cfg);

/// Result of one subcommand: exit code, structured report, and a CSV table
/// with the same rows.
struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::ordered_json report;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_minimize(const RunConfig& cfg);
CommandResult cmd_eigenvalue(const RunConfig& cfg);
CommandResult cmd_branches(const RunConfig& cfg);
CommandResult cmd_balance(const RunConfig& cfg);

/// Writes <dir>/<name>.json or .csv according to cfg.format; returns the path.
std::string write_result(const RunConfig& cfg, const std::string& name, const CommandResult& result);

/// Full entry point: parses argv, runs one subcommand, writes its file and a
/// one-line summary to out. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conflab
