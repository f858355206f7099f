#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nsf/rayleigh_benard.hpp"
#include "nsf/scheme.hpp"
#include "nsf/uq.hpp"

namespace nsf {

enum class RunMode { deterministic, sc, mc, convergence, verify };

RunMode parse_mode(const std::string& name);  // throws ConfigError
const char* mode_name(RunMode mode);

/// Initial data for deterministic and verify runs.
enum class DataKind { rayleigh_benard, equilibrium };

/// Everything a run needs. Defaults are the Rayleigh-Benard setup.
struct RunConfig {
  RunMode mode = RunMode::deterministic;
  int nx = 64;
  int ny = 32;
  double x1_extent = 4.0;
  double final_time = 1.0;
  SchemeParams scheme{};
  RBConfig rb = RBConfig::with_seed(20240611);

  DataKind data = DataKind::rayleigh_benard;
  double equilibrium_rho = 1.0;
  double equilibrium_theta = 1.0;  // also the wall temperature; gravity is switched off

  // Ensembles
  int sc_points = 5;
  double param_lo = -0.1;
  double param_hi = 0.1;
  int mc_members = 16;
  int mc_groups = 5;
  std::uint64_t mc_seed = 2024;

  // Convergence ladders
  std::string ladder = "sc";  // "sc" or "mc"
  ScLadder sc_ladder{};
  McLadder mc_ladder{};
  std::vector<double> lambda_thresholds{2.0, 5.0, 10.0, 15.0, 20.0, 30.0, 50.0};

  // Output
  std::filesystem::path out_dir = "nsf-out";
  int snapshot_every = 0;
  std::vector<double> line_ordinates{-0.75, 0.75};
  int threads = 1;

  /// Throws ConfigError on any inconsistent or out-of-range value.
  void validate() const;
};

/// Reads a JSON document. Unknown keys are rejected; missing keys keep defaults.
/// When `rb.aj`/`rb.bj` are absent they are drawn from `rb.perturbation_seed`.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text);

/// Full configuration (with the drawn a_j, b_j) as JSON; parse_config of the
/// result reproduces `cfg`.
std::string config_to_json(const RunConfig& cfg);

}  // namespace nsf
