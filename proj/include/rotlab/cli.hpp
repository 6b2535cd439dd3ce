#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotlab::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Invalid arguments / configuration; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-algorithm hyperparameters. Negative lambda/beta mean the standard
/// problem-derived choice (sigma^2 d, sigma^2 sqrt(d), 1/(2d)).
struct AlgoSettings {
  double gd_eta = 0.05;
  double egpm_eta = 50.0;
  double aegu_eta = 0.25;
  double aegu_beta = -1.0;
  double egu_eta = 0.05;
  double spindly_eta = 0.25;
  double adagrad_eta = 0.05;
  double adagrad_beta = 1.0;
  double adagrad_eps = 1e-8;
  double incp_eta = 0.05;
  double ridge_lambda = -1.0;
  double priming_lambda = -1.0;
  double flow_adagrad_beta = 1.0;
  double flow_adagrad_eps = 1e-8;
};

/// Fully resolved run configuration; the manifest serializes this struct so
/// a run can be replayed byte-for-byte.
struct RunConfig {
  std::string command;
  std::string preset = "custom";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = ".";

  int d = 256;
  int m = 4;
  double sigma = 1.0;
  double eta = 50.0;     // bounds: EG step size
  double delta = 0.001;
  int seeds = 100;
  int steps = 2000;      // discrete horizon
  double t_max = 1000.0; // flow horizon
  int grid_points = 50;
  std::vector<std::string> algorithms;
  AlgoSettings algo;

  std::string metric = "egu";
  double box_lo1 = 0.5, box_lo2 = 0.5;
  double box_hi1 = 2.0, box_hi2 = 2.0;
  int resolution = 20;

  double scale1 = 2.0, scale2 = 1.0;  // anisotropic demo column scaling

  std::string suite = "all";
};

/// Fills the preset's fields (fig2a | fig2b | fig2b-large | fig4 | custom);
/// command-line overrides are applied afterwards by the caller.
void apply_preset(RunConfig& cfg);

int run_bounds(const RunConfig& cfg, std::ostream& log);
int run_curves(const RunConfig& cfg, std::ostream& log);
int run_trajectories(const RunConfig& cfg, std::ostream& log);
int run_metric_grid(const RunConfig& cfg, std::ostream& log);
int run_verify(const RunConfig& cfg, std::ostream& log);

/// Replays the configuration stored in a manifest file. `out_dir_override`
/// empty keeps the recorded output directory.
int run_from_manifest(const std::string& manifest_path,
                      const std::string& out_dir_override, std::ostream& log);

/// Dispatch on cfg.command.
int run_command(const RunConfig& cfg, std::ostream& log);

std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const std::string& json_text);

}  // namespace rotlab::cli
