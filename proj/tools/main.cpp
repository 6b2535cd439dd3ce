#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotlab/cli.hpp"

namespace {

using rotlab::cli::RunConfig;

/// Everything the user may override; presets fill the rest.
struct Overrides {
  std::optional<int> d, m, seeds, steps, grid_points, resolution;
  std::optional<double> sigma, eta, delta, t_max;
  std::optional<double> box_lo1, box_lo2, box_hi1, box_hi2, scale1, scale2;
  std::optional<std::string> metric, suite;
  std::vector<std::string> algorithms;

  std::optional<double> gd_eta, egpm_eta, aegu_eta, aegu_beta, egu_eta,
      spindly_eta, adagrad_eta, adagrad_beta, adagrad_eps, incp_eta,
      ridge_lambda, priming_lambda, flow_adagrad_beta, flow_adagrad_eps;

  void apply(RunConfig& cfg) const {
    auto set = [](auto& dst, const auto& src) {
      if (src) dst = *src;
    };
    set(cfg.d, d);
    set(cfg.m, m);
    set(cfg.seeds, seeds);
    set(cfg.steps, steps);
    set(cfg.grid_points, grid_points);
    set(cfg.resolution, resolution);
    set(cfg.sigma, sigma);
    set(cfg.eta, eta);
    set(cfg.delta, delta);
    set(cfg.t_max, t_max);
    set(cfg.box_lo1, box_lo1);
    set(cfg.box_lo2, box_lo2);
    set(cfg.box_hi1, box_hi1);
    set(cfg.box_hi2, box_hi2);
    set(cfg.scale1, scale1);
    set(cfg.scale2, scale2);
    set(cfg.metric, metric);
    set(cfg.suite, suite);
    if (!algorithms.empty()) cfg.algorithms = algorithms;

    set(cfg.algo.gd_eta, gd_eta);
    set(cfg.algo.egpm_eta, egpm_eta);
    set(cfg.algo.aegu_eta, aegu_eta);
    set(cfg.algo.aegu_beta, aegu_beta);
    set(cfg.algo.egu_eta, egu_eta);
    set(cfg.algo.spindly_eta, spindly_eta);
    set(cfg.algo.adagrad_eta, adagrad_eta);
    set(cfg.algo.adagrad_beta, adagrad_beta);
    set(cfg.algo.adagrad_eps, adagrad_eps);
    set(cfg.algo.incp_eta, incp_eta);
    set(cfg.algo.ridge_lambda, ridge_lambda);
    set(cfg.algo.priming_lambda, priming_lambda);
    set(cfg.algo.flow_adagrad_beta, flow_adagrad_beta);
    set(cfg.algo.flow_adagrad_eps, flow_adagrad_eps);
  }
};

void add_problem_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--d", o.d, "problem dimension");
  sub->add_option("--m", o.m, "stacked design copies");
  sub->add_option("--sigma", o.sigma, "label noise std");
}

void add_algo_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--gd-eta", o.gd_eta, "gradient descent step size");
  sub->add_option("--egpm-eta", o.egpm_eta, "EG+- step size");
  sub->add_option("--aegu-eta", o.aegu_eta, "approximated EGU+- step size");
  sub->add_option("--aegu-beta", o.aegu_beta,
                  "approximated EGU+- beta (default 1/(2d))");
  sub->add_option("--egu-eta", o.egu_eta, "EGU step size");
  sub->add_option("--spindly-eta", o.spindly_eta, "spindly step size");
  sub->add_option("--adagrad-eta", o.adagrad_eta, "adagrad step size");
  sub->add_option("--adagrad-beta", o.adagrad_beta, "adagrad accumulator rate");
  sub->add_option("--adagrad-eps", o.adagrad_eps, "adagrad accumulator floor");
  sub->add_option("--incp-eta", o.incp_eta, "incremental priming step size");
  sub->add_option("--ridge-lambda", o.ridge_lambda,
                  "ridge penalty (default sigma^2 d)");
  sub->add_option("--priming-lambda", o.priming_lambda,
                  "priming penalty (default sigma^2 sqrt(d))");
  sub->add_option("--flow-adagrad-beta", o.flow_adagrad_beta,
                  "adagrad flow accumulator rate");
  sub->add_option("--flow-adagrad-eps", o.flow_adagrad_eps,
                  "adagrad flow accumulator floor");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic sparse-regression optimizer laboratory"};
  app.set_config("--config", "", "flat key=value configuration file");

  RunConfig cfg;
  Overrides o;
  std::string from_manifest;
  std::string out_dir_flag;

  app.add_option("--seed", cfg.seed, "master seed for all randomness");
  app.add_option("--out-dir", out_dir_flag, "output directory");
  app.add_option("--threads", cfg.threads, "seed fan-out workers");
  app.add_option("--preset", cfg.preset,
                 "fig2a | fig2b | fig2b-large | fig4 | custom");
  app.add_option("--from-manifest", from_manifest,
                 "replay the configuration stored in a manifest.json");

  CLI::App* bounds = app.add_subcommand("bounds", "closed-form risk bounds");
  add_problem_options(bounds, o);
  bounds->add_option("--eta", o.eta, "EG+- step size in the one-step bound");
  bounds->add_option("--delta", o.delta, "confidence parameter");

  CLI::App* curves = app.add_subcommand(
      "curves", "mean excess-risk curves over seeded datasets");
  add_problem_options(curves, o);
  curves->add_option("--seeds", o.seeds, "number of seeded datasets");
  curves->add_option("--steps", o.steps, "training horizon");
  curves->add_option("--grid-points", o.grid_points, "log-grid resolution");
  curves->add_option("--algorithms", o.algorithms, "algorithm roster")
      ->delimiter(',');
  curves->add_option("--delta", o.delta, "confidence for the bound overlay");
  curves->add_option("--eta", o.eta, "eta echoed into the bound overlay");
  add_algo_options(curves, o);

  CLI::App* traj = app.add_subcommand(
      "trajectories", "2-d weight trajectories (flows or rotated demos)");
  add_problem_options(traj, o);
  traj->add_option("--seeds", o.seeds, "number of seeded datasets");
  traj->add_option("--steps", o.steps, "discrete horizon (fig4)");
  traj->add_option("--t-max", o.t_max, "flow horizon (fig2a)");
  traj->add_option("--grid-points", o.grid_points, "time-grid resolution");
  traj->add_option("--algorithms", o.algorithms, "algorithm roster")
      ->delimiter(',');
  traj->add_option("--scale1", o.scale1, "first column scale (fig4)");
  traj->add_option("--scale2", o.scale2, "second column scale (fig4)");
  add_algo_options(traj, o);

  CLI::App* metric = app.add_subcommand("metric-grid", "metric tensor table");
  metric->add_option("--metric", o.metric, "egu | euclidean");
  metric->add_option("--box-lo1", o.box_lo1, "box lower corner, first axis");
  metric->add_option("--box-lo2", o.box_lo2, "box lower corner, second axis");
  metric->add_option("--box-hi1", o.box_hi1, "box upper corner, first axis");
  metric->add_option("--box-hi2", o.box_hi2, "box upper corner, second axis");
  metric->add_option("--resolution", o.resolution, "points per axis");

  CLI::App* verify = app.add_subcommand("verify", "property suites");
  verify->add_option("--suite", o.suite,
                     "all | flows | equivalence | invariance | bounds");

  // global flags remain usable after the subcommand name
  for (CLI::App* sub : {bounds, curves, traj, metric, verify})
    sub->fallthrough();

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rotlab::cli::kExitUsage;
  }

  try {
    if (!from_manifest.empty())
      return rotlab::cli::run_from_manifest(from_manifest, out_dir_flag,
                                            std::cout);

    CLI::App* chosen = nullptr;
    for (CLI::App* sub : {bounds, curves, traj, metric, verify})
      if (sub->parsed()) chosen = sub;
    if (chosen == nullptr) {
      std::cerr << "error: a subcommand is required (bounds, curves, "
                   "trajectories, metric-grid, verify)\n";
      return rotlab::cli::kExitUsage;
    }

    cfg.command = chosen->get_name();
    rotlab::cli::apply_preset(cfg);
    o.apply(cfg);
    if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
    return rotlab::cli::run_command(cfg, std::cout);
  } catch (const rotlab::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rotlab::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
