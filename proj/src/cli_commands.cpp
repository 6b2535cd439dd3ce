#include "rotlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "rotlab/bounds.hpp"
#include "rotlab/flows.hpp"
#include "rotlab/invariance.hpp"
#include "rotlab/io.hpp"
#include "rotlab/optimizers.hpp"
#include "rotlab/problem.hpp"
#include "rotlab/verification.hpp"

namespace rotlab::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// --- configuration ----------------------------------------------------------

void apply_preset(RunConfig& cfg) {
  if (cfg.preset == "custom" || cfg.preset.empty()) return;
  if (cfg.preset == "fig2b" || cfg.preset == "fig2b-large") {
    cfg.d = cfg.preset == "fig2b-large" ? 1024 : 256;
    cfg.m = 4;
    cfg.sigma = 1.0;
    cfg.seeds = 100;
    cfg.steps = 2000;
    cfg.grid_points = 50;
    cfg.delta = 0.001;
    cfg.algorithms = {"gd", "ridge", "approx_egu_pm", "priming", "adagrad"};
    return;
  }
  if (cfg.preset == "fig2a") {
    cfg.d = 2;
    cfg.m = 2;
    cfg.sigma = 0.5;
    cfg.seeds = 10;
    cfg.t_max = 1000.0;
    cfg.grid_points = 100;
    cfg.algorithms = {"gd", "egu_pm", "primed", "adagrad"};
    return;
  }
  if (cfg.preset == "fig4") {
    cfg.d = 2;
    cfg.m = 1;
    cfg.sigma = 0.3;
    cfg.seeds = 50;
    cfg.steps = 2000;
    cfg.scale1 = 2.0;
    cfg.scale2 = 1.0;
    cfg.algorithms = {"gd", "approx_egu_pm"};
    cfg.algo.aegu_eta = 0.025;
    cfg.algo.aegu_beta = 1e-4;
    return;
  }
  throw UsageError("unknown preset '" + cfg.preset +
                   "' (expected fig2a, fig2b, fig2b-large, fig4 or custom)");
}

namespace {

ordered_json algo_to_json(const AlgoSettings& a) {
  return ordered_json{{"gd_eta", a.gd_eta},
                      {"egpm_eta", a.egpm_eta},
                      {"aegu_eta", a.aegu_eta},
                      {"aegu_beta", a.aegu_beta},
                      {"egu_eta", a.egu_eta},
                      {"spindly_eta", a.spindly_eta},
                      {"adagrad_eta", a.adagrad_eta},
                      {"adagrad_beta", a.adagrad_beta},
                      {"adagrad_eps", a.adagrad_eps},
                      {"incp_eta", a.incp_eta},
                      {"ridge_lambda", a.ridge_lambda},
                      {"priming_lambda", a.priming_lambda},
                      {"flow_adagrad_beta", a.flow_adagrad_beta},
                      {"flow_adagrad_eps", a.flow_adagrad_eps}};
}

AlgoSettings algo_from_json(const ordered_json& j) {
  AlgoSettings a;
  a.gd_eta = j.value("gd_eta", a.gd_eta);
  a.egpm_eta = j.value("egpm_eta", a.egpm_eta);
  a.aegu_eta = j.value("aegu_eta", a.aegu_eta);
  a.aegu_beta = j.value("aegu_beta", a.aegu_beta);
  a.egu_eta = j.value("egu_eta", a.egu_eta);
  a.spindly_eta = j.value("spindly_eta", a.spindly_eta);
  a.adagrad_eta = j.value("adagrad_eta", a.adagrad_eta);
  a.adagrad_beta = j.value("adagrad_beta", a.adagrad_beta);
  a.adagrad_eps = j.value("adagrad_eps", a.adagrad_eps);
  a.incp_eta = j.value("incp_eta", a.incp_eta);
  a.ridge_lambda = j.value("ridge_lambda", a.ridge_lambda);
  a.priming_lambda = j.value("priming_lambda", a.priming_lambda);
  a.flow_adagrad_beta = j.value("flow_adagrad_beta", a.flow_adagrad_beta);
  a.flow_adagrad_eps = j.value("flow_adagrad_eps", a.flow_adagrad_eps);
  return a;
}

ordered_json config_to_json_obj(const RunConfig& c) {
  return ordered_json{{"command", c.command},
                      {"preset", c.preset},
                      {"seed", c.seed},
                      {"threads", c.threads},
                      {"out_dir", c.out_dir},
                      {"d", c.d},
                      {"m", c.m},
                      {"sigma", c.sigma},
                      {"eta", c.eta},
                      {"delta", c.delta},
                      {"seeds", c.seeds},
                      {"steps", c.steps},
                      {"t_max", c.t_max},
                      {"grid_points", c.grid_points},
                      {"algorithms", c.algorithms},
                      {"algo", algo_to_json(c.algo)},
                      {"metric", c.metric},
                      {"box_lo1", c.box_lo1},
                      {"box_lo2", c.box_lo2},
                      {"box_hi1", c.box_hi1},
                      {"box_hi2", c.box_hi2},
                      {"resolution", c.resolution},
                      {"scale1", c.scale1},
                      {"scale2", c.scale2},
                      {"suite", c.suite}};
}

RunConfig config_from_json_obj(const ordered_json& j) {
  RunConfig c;
  c.command = j.value("command", c.command);
  c.preset = j.value("preset", c.preset);
  c.seed = j.value("seed", c.seed);
  c.threads = j.value("threads", c.threads);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.d = j.value("d", c.d);
  c.m = j.value("m", c.m);
  c.sigma = j.value("sigma", c.sigma);
  c.eta = j.value("eta", c.eta);
  c.delta = j.value("delta", c.delta);
  c.seeds = j.value("seeds", c.seeds);
  c.steps = j.value("steps", c.steps);
  c.t_max = j.value("t_max", c.t_max);
  c.grid_points = j.value("grid_points", c.grid_points);
  c.algorithms = j.value("algorithms", c.algorithms);
  if (j.contains("algo")) c.algo = algo_from_json(j.at("algo"));
  c.metric = j.value("metric", c.metric);
  c.box_lo1 = j.value("box_lo1", c.box_lo1);
  c.box_lo2 = j.value("box_lo2", c.box_lo2);
  c.box_hi1 = j.value("box_hi1", c.box_hi1);
  c.box_hi2 = j.value("box_hi2", c.box_hi2);
  c.resolution = j.value("resolution", c.resolution);
  c.scale1 = j.value("scale1", c.scale1);
  c.scale2 = j.value("scale2", c.scale2);
  c.suite = j.value("suite", c.suite);
  return c;
}

// --- shared helpers ---------------------------------------------------------

AlgorithmConfig make_algo(const std::string& name, const AlgoSettings& s, int d,
                          double sigma) {
  AlgorithmConfig a;
  if (name == "gd") {
    a.id = Algorithm::kGd;
    a.eta = s.gd_eta;
  } else if (name == "eg_pm") {
    a.id = Algorithm::kEgPm;
    a.eta = s.egpm_eta;
  } else if (name == "approx_egu_pm") {
    a.id = Algorithm::kApproxEguPm;
    a.eta = s.aegu_eta;
    a.beta = s.aegu_beta > 0.0 ? s.aegu_beta : 1.0 / (2.0 * d);
  } else if (name == "egu") {
    a.id = Algorithm::kEgu;
    a.eta = s.egu_eta;
  } else if (name == "spindly") {
    a.id = Algorithm::kSpindly;
    a.eta = s.spindly_eta;
  } else if (name == "adagrad") {
    a.id = Algorithm::kAdagrad;
    a.eta = s.adagrad_eta;
    a.beta_pre = s.adagrad_beta;
    a.eps = s.adagrad_eps;
  } else if (name == "inc_priming") {
    a.id = Algorithm::kIncPriming;
    a.eta = s.incp_eta;
  } else if (name == "ridge") {
    a.id = Algorithm::kRidge;
    a.lambda = s.ridge_lambda >= 0.0 ? s.ridge_lambda : sigma * sigma * d;
  } else if (name == "priming") {
    a.id = Algorithm::kPriming;
    a.lambda =
        s.priming_lambda >= 0.0 ? s.priming_lambda : sigma * sigma * std::sqrt(d);
  } else if (name == "pc_weight") {
    a.id = Algorithm::kPcWeight;
  } else {
    throw UsageError("unknown algorithm '" + name + "'");
  }
  return a;
}

bool is_iterative(Algorithm id) {
  return id != Algorithm::kRidge && id != Algorithm::kPriming &&
         id != Algorithm::kPcWeight;
}

std::vector<int> log_step_grid(int t_max, int points) {
  std::vector<int> grid = {0};
  if (t_max < 1) return grid;
  const double hi = std::log10(static_cast<double>(t_max));
  for (int k = 0; k < points; ++k) {
    const double x = points == 1 ? hi : hi * k / (points - 1);
    const int step = static_cast<int>(std::lround(std::pow(10.0, x)));
    if (step > grid.back()) grid.push_back(step);
  }
  if (grid.back() != t_max) grid.push_back(t_max);
  return grid;
}

std::vector<double> log_time_grid(double t_max, int points) {
  std::vector<double> grid = {0.0};
  const double lo = -2.0;
  const double hi = std::log10(t_max);
  for (int k = 0; k < points - 1; ++k) {
    grid.push_back(std::pow(10.0, lo + (hi - lo) * k / (points - 2)));
  }
  return grid;
}

/// Runs fn(seed_index) over [0, n) on `threads` workers; any exception is
/// rethrown in the caller. Work is indexed, so results are
/// schedule-independent.
template <typename Fn>
void parallel_seeds(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mutex;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (int i = t; i < n; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

void write_manifest(const RunConfig& cfg,
                    const std::map<std::string, std::string>& digests,
                    double wall_seconds) {
  ordered_json m;
  m["tool_version"] = kToolVersion;
  m["command"] = cfg.command;
  m["config"] = config_to_json_obj(cfg);
  m["wall_clock_seconds"] = wall_seconds;
  ordered_json outs = ordered_json::object();
  for (const auto& [name, digest] : digests) outs[name] = digest;
  m["outputs"] = outs;
  write_file_atomic(fs::path(cfg.out_dir) / "manifest.json", m.dump(2) + "\n");
}

std::string emit(const fs::path& dir, const std::string& name,
                 const std::string& contents) {
  fs::create_directories(dir);
  write_file_atomic(dir / name, contents);
  return fnv1a_hex(contents);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

std::string config_to_json(const RunConfig& cfg) {
  return config_to_json_obj(cfg).dump(2);
}

RunConfig config_from_json(const std::string& text) {
  return config_from_json_obj(ordered_json::parse(text));
}

// --- bounds -----------------------------------------------------------------

int run_bounds(const RunConfig& cfg, std::ostream& log) {
  Timer timer;
  BoundsReport r;
  try {
    r = evaluate_bounds(cfg.d, cfg.m, cfg.sigma, cfg.eta, cfg.delta);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  log << "bounds for d=" << cfg.d << " m=" << cfg.m << " sigma=" << cfg.sigma
      << " eta=" << cfg.eta << " delta=" << cfg.delta << "\n";
  log << "  thm2_lower         " << format_double(r.thm2_lower) << "\n"
      << "  thm6_iid_lower     " << format_double(r.thm6_iid_lower) << "\n"
      << "  thm3_egpm_upper    " << format_double(r.thm3_egpm_upper) << "\n"
      << "  thm4_egu_upper     " << format_double(r.thm4_egu_upper) << "\n"
      << "  appE_spindly_upper " << format_double(r.appE_spindly_upper) << "\n"
      << "  appF_priming_upper " << format_double(r.appF_priming_upper) << "\n";

  ordered_json j{{"d", r.d},
                 {"m", r.m},
                 {"sigma", r.sigma},
                 {"eta", r.eta},
                 {"delta", r.delta},
                 {"thm2_lower", r.thm2_lower},
                 {"thm6_iid_lower", r.thm6_iid_lower},
                 {"thm3_egpm_upper", r.thm3_egpm_upper},
                 {"thm4_egu_upper", r.thm4_egu_upper},
                 {"appE_spindly_upper", r.appE_spindly_upper},
                 {"appF_priming_upper", r.appF_priming_upper}};
  std::map<std::string, std::string> digests;
  digests["bounds.json"] = emit(cfg.out_dir, "bounds.json", j.dump(2) + "\n");
  write_manifest(cfg, digests, timer.seconds());
  return kExitOk;
}

// --- curves -----------------------------------------------------------------

int run_curves(const RunConfig& cfg, std::ostream& log) {
  Timer timer;
  if (cfg.seeds < 1) throw UsageError("curves: seeds must be >= 1");
  if (cfg.steps < 1) throw UsageError("curves: steps must be >= 1");
  std::vector<std::string> names = cfg.algorithms;
  if (names.empty())
    names = {"gd", "ridge", "approx_egu_pm", "priming", "adagrad"};
  std::vector<AlgorithmConfig> algos;
  for (const std::string& n : names)
    algos.push_back(make_algo(n, cfg.algo, cfg.d, cfg.sigma));

  const std::vector<int> grid = log_step_grid(cfg.steps, cfg.grid_points);
  const int g = static_cast<int>(grid.size());
  const int n_algos = static_cast<int>(algos.size());

  // [algo][seed][grid]
  std::vector<std::vector<std::vector<double>>> excess(
      n_algos, std::vector<std::vector<double>>(cfg.seeds));
  auto runmin = excess;

  parallel_seeds(cfg.seeds, cfg.threads, [&](int si) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(si));
    ProblemConfig pc;
    pc.d = cfg.d;
    pc.m = cfg.m;
    pc.sigma = cfg.sigma;
    const Dataset ds = build_dataset(pc, rng);
    const LeastSquares ls = least_squares(ds);
    const LinearGradient grad = LinearGradient::from_least_squares(ls);

    for (int a = 0; a < n_algos; ++a) {
      std::vector<double>& ex = excess[a][si];
      std::vector<double>& rm = runmin[a][si];
      ex.resize(g);
      rm.resize(g);
      if (is_iterative(algos[a].id)) {
        const Trajectory traj =
            run_optimizer(algos[a], grad, ds.target, cfg.steps, 1);
        // traj.points[k] is step k (record_every = 1)
        for (int k = 0; k < g; ++k) {
          const TrajectoryPoint& pt = traj.points[static_cast<std::size_t>(grid[k])];
          ex[k] = pt.excess;
          rm[k] = pt.running_min;
        }
      } else {
        Vector w;
        switch (algos[a].id) {
          case Algorithm::kRidge: w = ridge_solve(ds, algos[a].lambda); break;
          case Algorithm::kPriming: w = priming_solve(ds, algos[a].lambda); break;
          default: w = top_principal_component(ds.x.transpose() * ds.x); break;
        }
        const double e = excess_risk(w, ds.target);
        for (int k = 0; k < g; ++k) {
          ex[k] = e;
          rm[k] = e;
        }
      }
    }
  });

  std::string csv = "algorithm,t,mean,stderr,runmin\n";
  for (int a = 0; a < n_algos; ++a) {
    for (int k = 0; k < g; ++k) {
      double sum = 0.0, sum_min = 0.0;
      for (int si = 0; si < cfg.seeds; ++si) {
        sum += excess[a][si][k];
        sum_min += runmin[a][si][k];
      }
      const double mean = sum / cfg.seeds;
      const double min_mean = sum_min / cfg.seeds;
      double var = 0.0;
      for (int si = 0; si < cfg.seeds; ++si)
        var += (excess[a][si][k] - mean) * (excess[a][si][k] - mean);
      const double stderr_ =
          cfg.seeds > 1 ? std::sqrt(var / (cfg.seeds - 1) / cfg.seeds) : 0.0;
      csv += names[a] + "," + std::to_string(grid[k]) + "," +
             format_double(mean) + "," + format_double(stderr_) + "," +
             format_double(min_mean) + "\n";
    }
  }

  // bound overlays
  const BoundsReport br =
      evaluate_bounds(cfg.d, cfg.m, cfg.sigma, cfg.eta, cfg.delta);
  for (const auto& [bname, bval] :
       {std::pair<std::string, double>{"bound:thm2_lower", br.thm2_lower},
        std::pair<std::string, double>{"bound:thm4_egu_upper",
                                       br.thm4_egu_upper}}) {
    for (int k = 0; k < g; ++k)
      csv += bname + "," + std::to_string(grid[k]) + "," + format_double(bval) +
             ",0," + format_double(bval) + "\n";
  }

  std::map<std::string, std::string> digests;
  digests["curves.csv"] = emit(cfg.out_dir, "curves.csv", csv);
  write_manifest(cfg, digests, timer.seconds());

  for (int a = 0; a < n_algos; ++a) {
    double final_min = 0.0;
    for (int si = 0; si < cfg.seeds; ++si) final_min += runmin[a][si][g - 1];
    log << "  " << names[a]
        << ": mean running-min excess = " << format_double(final_min / cfg.seeds)
        << "\n";
  }
  log << "curves.csv written to " << cfg.out_dir << " (" << timer.seconds()
      << " s)\n";
  return kExitOk;
}

// --- trajectories -----------------------------------------------------------

namespace {

FlowAlgorithm flow_by_name(const std::string& name) {
  if (name == "gd") return FlowAlgorithm::kGd;
  if (name == "egu_pm") return FlowAlgorithm::kEguPm;
  if (name == "primed") return FlowAlgorithm::kPrimed;
  if (name == "adagrad") return FlowAlgorithm::kAdagrad;
  throw UsageError("trajectories: flow '" + name +
                   "' not available (expected gd, egu_pm, primed, adagrad)");
}

}  // namespace

int run_trajectories(const RunConfig& cfg, std::ostream& log) {
  Timer timer;
  if (cfg.d != 2)
    throw UsageError("trajectories: the presets are 2-d (d=" +
                     std::to_string(cfg.d) + " requested)");
  if (cfg.seeds < 1) throw UsageError("trajectories: seeds must be >= 1");

  std::string csv = "algorithm,seed,t,w1,w2\n";
  std::string points_csv = "seed,w1,w2\n";
  std::map<std::string, std::string> digests;

  if (cfg.preset == "fig4") {
    const std::vector<std::string> names =
        cfg.algorithms.empty()
            ? std::vector<std::string>{"gd", "approx_egu_pm"}
            : cfg.algorithms;
    std::vector<AlgorithmConfig> algos;
    for (const std::string& n : names)
      algos.push_back(make_algo(n, cfg.algo, cfg.d, cfg.sigma));
    Vector scale(2);
    scale << cfg.scale1, cfg.scale2;

    std::vector<double> min_dist_sum(algos.size(), 0.0);
    for (int si = 0; si < cfg.seeds; ++si) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(si));
      const AnisotropicDemo demo = anisotropic_demo(
          scale, /*rotate_input=*/true, algos, cfg.steps, rng, cfg.sigma, cfg.m);
      for (std::size_t a = 0; a < demo.runs.size(); ++a) {
        const AnisotropicRun& run = demo.runs[a];
        for (std::size_t k = 0; k < run.trajectory.size(); ++k) {
          csv += names[a] + "," + std::to_string(si) + "," + std::to_string(k) +
                 "," + format_double(run.trajectory[k][0]) + "," +
                 format_double(run.trajectory[k][1]) + "\n";
        }
        min_dist_sum[a] += run.min_distance;
      }
      points_csv += std::to_string(si) + "," + format_double(demo.w_ls[0]) +
                    "," + format_double(demo.w_ls[1]) + "\n";
    }
    for (std::size_t a = 0; a < algos.size(); ++a)
      log << "  " << names[a] << ": mean min distance to target = "
          << format_double(min_dist_sum[a] / cfg.seeds) << "\n";
  } else {
    // analytic flow trajectories (fig2a and 2-d custom runs)
    std::vector<FlowAlgorithm> flows;
    std::vector<std::string> names =
        cfg.algorithms.empty()
            ? std::vector<std::string>{"gd", "egu_pm", "primed", "adagrad"}
            : cfg.algorithms;
    for (const std::string& n : names) flows.push_back(flow_by_name(n));
    const std::vector<double> tgrid = log_time_grid(cfg.t_max, cfg.grid_points);

    for (int si = 0; si < cfg.seeds; ++si) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(si));
      ProblemConfig pc;
      pc.d = 2;
      pc.m = cfg.m;
      pc.sigma = cfg.sigma;
      const Dataset ds = build_dataset(pc, rng);
      const LeastSquares ls = least_squares(ds);
      const Vector w0 = Vector::Zero(2);
      for (std::size_t a = 0; a < flows.size(); ++a) {
        const FlowParams params =
            make_flow_params(flows[a], ls.w_ls, w0, cfg.algo.flow_adagrad_beta,
                             cfg.algo.flow_adagrad_eps);
        for (double t : tgrid) {
          const Vector w = flow_at(params, t);
          csv += names[a] + "," + std::to_string(si) + "," + format_double(t) +
                 "," + format_double(w[0]) + "," + format_double(w[1]) + "\n";
        }
      }
      points_csv += std::to_string(si) + "," + format_double(ls.w_ls[0]) + "," +
                    format_double(ls.w_ls[1]) + "\n";
    }
  }

  digests["trajectories.csv"] = emit(cfg.out_dir, "trajectories.csv", csv);
  digests["ls_points.csv"] = emit(cfg.out_dir, "ls_points.csv", points_csv);
  write_manifest(cfg, digests, timer.seconds());
  log << "trajectories.csv written to " << cfg.out_dir << " (" << timer.seconds()
      << " s)\n";
  return kExitOk;
}

// --- metric grid -------------------------------------------------------------

int run_metric_grid(const RunConfig& cfg, std::ostream& log) {
  Timer timer;
  MetricKind kind;
  if (cfg.metric == "egu") {
    kind = MetricKind::kEgu;
  } else if (cfg.metric == "euclidean") {
    kind = MetricKind::kEuclidean;
  } else {
    throw UsageError("metric-grid: metric must be 'egu' or 'euclidean'");
  }
  std::vector<MetricGridEntry> entries;
  try {
    entries = metric_grid(kind, {cfg.box_lo1, cfg.box_lo2},
                          {cfg.box_hi1, cfg.box_hi2}, cfg.resolution);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  std::string csv = "w1,w2,g11,g22\n";
  for (const MetricGridEntry& e : entries)
    csv += format_double(e.w1) + "," + format_double(e.w2) + "," +
           format_double(e.g11) + "," + format_double(e.g22) + "\n";

  std::map<std::string, std::string> digests;
  digests["metric.csv"] = emit(cfg.out_dir, "metric.csv", csv);
  write_manifest(cfg, digests, timer.seconds());
  log << "metric.csv written to " << cfg.out_dir << " (" << entries.size()
      << " rows)\n";
  return kExitOk;
}

// --- verify -------------------------------------------------------------------

int run_verify(const RunConfig& cfg, std::ostream& log) {
  std::vector<CheckResult> checks;
  auto append = [&](std::vector<CheckResult> more) {
    for (auto& c : more) checks.push_back(std::move(c));
  };
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "flows") append(verify_flows(cfg.seed));
  if (all || cfg.suite == "equivalence") append(verify_equivalence(cfg.seed));
  if (all || cfg.suite == "invariance") append(verify_invariance(cfg.seed));
  if (all || cfg.suite == "bounds") append(verify_bounds());
  if (checks.empty())
    throw UsageError("verify: unknown suite '" + cfg.suite +
                     "' (expected all, flows, equivalence, invariance, bounds)");

  int failures = 0;
  for (const CheckResult& c : checks) {
    log << (c.pass ? "PASS " : "FAIL ") << c.name
        << "  value=" << format_double(c.value) << " tol=" << format_double(c.tol);
    if (!c.detail.empty()) log << "  (" << c.detail << ")";
    log << "\n";
    if (!c.pass) ++failures;
  }
  log << (failures == 0 ? "all checks passed\n"
                        : std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? kExitOk : kExitVerifyFailed;
}

// --- dispatch ----------------------------------------------------------------

int run_command(const RunConfig& cfg, std::ostream& log) {
  if (cfg.command == "bounds") return run_bounds(cfg, log);
  if (cfg.command == "curves") return run_curves(cfg, log);
  if (cfg.command == "trajectories") return run_trajectories(cfg, log);
  if (cfg.command == "metric-grid") return run_metric_grid(cfg, log);
  if (cfg.command == "verify") return run_verify(cfg, log);
  throw UsageError("unknown command '" + cfg.command + "'");
}

int run_from_manifest(const std::string& manifest_path,
                      const std::string& out_dir_override, std::ostream& log) {
  ordered_json m;
  try {
    m = ordered_json::parse(read_file(manifest_path));
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot load manifest: ") + e.what());
  }
  if (!m.contains("config"))
    throw UsageError("manifest has no 'config' object");
  RunConfig cfg = config_from_json_obj(m.at("config"));
  if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
  return run_command(cfg, log);
}

}  // namespace rotlab::cli
