#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rotlab/linalg.hpp"

namespace rotlab {

enum class FlowAlgorithm { kGd, kEgu, kEguPm, kPrimed, kAdagrad, kBurg };

/// Per-coordinate integration constants for a closed-form trajectory.
/// Fields irrelevant to the algorithm stay empty; degenerate coordinates
/// (fixed points of the dynamics) are flagged and evaluate to constants.
struct FlowParams {
  FlowAlgorithm id = FlowAlgorithm::kGd;
  Vector w_ls;
  Vector w0;
  std::vector<bool> degenerate;

  Vector c;          // EGU: artanh(2 w0/w_ls - 1)
  Vector tau0;       // EGU+-: arsinh((1 + w_ls w0)/(w0 - w_ls))
  Vector rate;       // EGU+-: 2 s sqrt(w_ls^2 + 1), s = sign(w0 - w_ls)
  Vector k;          // adagrad
  Vector ell;        // adagrad
  Vector b;          // Burg time offset (NaN where w0 > w_ls; see burg_y)
  Vector burg_y;     // Burg: w_ls/w0 - 1, drives both monotone branches
  double beta = 1.0;   // adagrad accumulator rate
  double eps = 1e-8;   // adagrad floor G(0)
};

/// Computes the constants for one algorithm; beta/eps are adagrad-only.
/// Domain violations (EGU start outside (0, w_ls) on a live coordinate,
/// Burg start not strictly positive) throw naming the coordinate.
FlowParams make_flow_params(FlowAlgorithm id, const Vector& w_ls,
                            const Vector& w0, double beta = 1.0,
                            double eps = 1e-8);

/// Evaluate the closed form at time t >= 0.
Vector flow_at(const FlowParams& params, double t);

// Named evaluators matching the per-algorithm formulas.
Vector egu_flow_at(const FlowParams& params, double t);
Vector egu_pm_flow_at(const FlowParams& params, double t);
Vector adagrad_flow_at(const FlowParams& params, double t);
Vector primed_flow_at(const Vector& w_ls, const Vector& w0, double t);
Vector burg_flow_at(const Vector& w_ls, const Vector& w0, double t);
Vector gd_flow_at(const Vector& w_ls, const Vector& w0, double t);

/// The four equivalent descriptions of one preconditioned flow, all
/// coordinatewise maps.
struct PreconditionerSpec {
  std::function<Vector(const Vector&)> precond_diag;  // P(w)
  std::function<Vector(const Vector&)> mirror_map;    // f(w)
  std::function<Vector(const Vector&)> reparam;       // g(w)
  std::function<Vector(const Vector&)> metric_diag;   // Gamma(w)
};

/// f = log, g = 2 sqrt, P = Diag(w), Gamma = Diag(w)^-1.
PreconditionerSpec egu_preconditioner_spec();

struct EquivalenceReport {
  double max_mirror_mismatch = 0.0;   // |P - (dw/dwtilde)|
  double max_reparam_mismatch = 0.0;  // |P - (dw/dwhat)(dw/dwhat)^T|
  double max_metric_mismatch = 0.0;   // |P - Gamma^-1|
  double max_jacobian_mismatch = 0.0; // max of the three
  double flow_deviation = 0.0;        // reparameterized flow vs closed form
};

/// Checks P = (dw/dwhat)(dw/dwhat)^T = dw/dwtilde = Gamma^-1 by central
/// finite differences (h = 1e-6) at each sample point (all strictly
/// positive), and integrates gradient flow in the reparameterized variable
/// g(w) from w0 against the EGU closed form on a t-grid in [0, t_max].
EquivalenceReport check_equivalences(const PreconditionerSpec& spec,
                                     const std::vector<Vector>& points,
                                     const Vector& flow_w_ls,
                                     const Vector& flow_w0,
                                     double t_max = 3.0);

enum class MetricKind { kEgu, kEuclidean };

struct MetricGridEntry {
  double w1, w2, g11, g22;
};

/// Tabulates the diagonal metric on a resolution x resolution grid over
/// [lo1, hi1] x [lo2, hi2] (row-major: w1 outer, w2 inner). The EGU metric
/// requires a strictly positive box.
std::vector<MetricGridEntry> metric_grid(MetricKind kind,
                                         std::array<double, 2> lo,
                                         std::array<double, 2> hi,
                                         int resolution);

}  // namespace rotlab
