#pragma once

#include <string>
#include <vector>

#include "rotlab/problem.hpp"

namespace rotlab {

// ---------------------------------------------------------------------------
// Per-algorithm state. Step functions are pure: state in, state out. Each has
// a LeastSquares form (gradient 2(w - w_ls)) and a LinearGradient form for
// general designs; the former forwards to the latter.
// ---------------------------------------------------------------------------

/// Plain gradient descent.
struct GdState {
  Vector w;
  double eta = 0.05;
};
GdState gd_step(const GdState& s, const LinearGradient& grad);
GdState gd_step(const GdState& s, const LeastSquares& ls);

/// Normalized two-sided exponentiated gradient: weights w = v+ - v-,
/// |v+|_1 + |v-|_1 = 1 maintained by joint normalization.
struct EgPmState {
  Vector v_plus;
  Vector v_minus;
  double eta = 1.0;

  static EgPmState uniform_init(int d, double eta);
  [[nodiscard]] Vector weights() const { return v_plus - v_minus; }
};
EgPmState eg_pm_step(const EgPmState& s, const LinearGradient& grad);
EgPmState eg_pm_step(const EgPmState& s, const LeastSquares& ls);

/// Unnormalized two-sided exponentiated gradient with the first-order
/// approximation folded in: w <- w - eta sqrt(w^2 + 4 beta^2) grad.
struct ApproxEguState {
  Vector w;
  double beta = 0.0;  // > 0
  double eta = 0.25;
};
ApproxEguState approx_egu_pm_step(const ApproxEguState& s,
                                  const LinearGradient& grad);
ApproxEguState approx_egu_pm_step(const ApproxEguState& s,
                                  const LeastSquares& ls);

/// One-sided multiplicative update w <- w * exp(-eta grad); requires w > 0.
Vector egu_step(const Vector& w, const LinearGradient& grad, double eta);
Vector egu_step(const Vector& w, const LeastSquares& ls, double eta);

/// Two-layer product reparameterization w = u * v trained by simultaneous
/// gradient descent on u and v.
struct SpindlyState {
  Vector u;
  Vector v;
  double eta = 0.25;

  /// u = sqrt(2/d) * 1, v = 0, so that w = 0 and (u +- v)^2/4 = 1/(2d).
  static SpindlyState standard_init(int d, double eta);
  [[nodiscard]] Vector weights() const { return u.cwiseProduct(v); }
};
SpindlyState spindly_step(const SpindlyState& s, const LinearGradient& grad);
SpindlyState spindly_step(const SpindlyState& s, const LeastSquares& ls);

/// Diagonal accumulator preconditioning: G += beta_pre grad^2 first, then
/// w <- w - eta G^{-1/2} grad.
struct AdagradState {
  Vector w;
  Vector g_acc;
  double beta_pre = 1.0;
  double eps = 1e-8;
  double eta = 0.05;

  static AdagradState zero_init(int d, double eta, double beta_pre = 1.0,
                                double eps = 1e-8);
};
AdagradState adagrad_step(const AdagradState& s, const LinearGradient& grad);
AdagradState adagrad_step(const AdagradState& s, const LeastSquares& ls);

/// Incremental priming: p <- p - eta p^2 grad(p); zero coordinates are
/// fixed points.
struct IncPrimingState {
  Vector p;
  double eta = 0.05;
};
IncPrimingState inc_priming_step(const IncPrimingState& s,
                                 const LinearGradient& grad);
IncPrimingState inc_priming_step(const IncPrimingState& s,
                                 const LeastSquares& ls);

/// Exact (non-approximated) two-sided EGU, kept for the v+ * v- = beta^2
/// invariant; tracks the cumulative gradient sum.
struct EguPmExactState {
  Vector grad_sum;
  double beta = 0.0;
  double eta = 0.25;

  [[nodiscard]] Vector v_plus() const;
  [[nodiscard]] Vector v_minus() const;
  [[nodiscard]] Vector weights() const { return v_plus() - v_minus(); }
};
EguPmExactState egu_pm_exact_step(const EguPmExactState& s,
                                  const LinearGradient& grad);

// ---------------------------------------------------------------------------
// Closed-form solvers.
// ---------------------------------------------------------------------------

/// (X^T X + lambda I)^{-1} X^T y. lambda = sigma^2 d recovers the
/// Gaussian-prior posterior mean for this problem.
Vector ridge_solve(const Dataset& ds, double lambda);
Vector ridge_solve(const Matrix& x, const Vector& y, double lambda);

/// Two-stage predictor: least squares, column rescaling by w_ls, ridge on
/// the rescaled design, un-rescale. Computed as
///   W (W X^T X W + lambda I)^{-1} W X^T y,  W = Diag(w_ls),
/// which sends coordinates with w_ls_i = 0 to 0 (their limit value).
Vector priming_solve(const Dataset& ds, double lambda);
Vector priming_solve(const Matrix& x, const Vector& y, double lambda);

// ---------------------------------------------------------------------------
// Trajectory driver.
// ---------------------------------------------------------------------------

enum class Algorithm {
  kGd,
  kEgPm,
  kApproxEguPm,
  kEgu,
  kSpindly,
  kAdagrad,
  kIncPriming,
  kRidge,      // closed form
  kPriming,    // closed form
  kPcWeight,   // top principal component of X^T X
};

std::string algorithm_name(Algorithm a);

/// Hyperparameters; fields irrelevant to an algorithm are ignored.
struct AlgorithmConfig {
  Algorithm id = Algorithm::kGd;
  double eta = 0.05;
  double beta = -1.0;      // approx EGU: -1 means 1/(2d)
  double beta_pre = 1.0;   // adagrad accumulator rate
  double eps = 1e-8;       // adagrad floor
  double lambda = -1.0;    // ridge/priming: -1 means the standard choice
  std::optional<Vector> init_w;  // EGU / incremental priming start
};

struct TrajectoryPoint {
  int step = 0;
  Vector w;
  double excess = 0.0;
  double running_min = 0.0;
};

struct Trajectory {
  Algorithm id{};
  std::vector<TrajectoryPoint> points;
  double final_excess = 0.0;
  double min_excess = 0.0;
};

/// Runs an iterative algorithm for T steps, recording every `record_every`
/// steps (step 0 and step T always included) along with the running minimum
/// excess risk. Closed-form algorithms are rejected here.
Trajectory run_optimizer(const AlgorithmConfig& cfg, const Dataset& ds, int t_steps,
                         int record_every = 1);

/// Same, but on an explicit gradient/target pair (general designs).
Trajectory run_optimizer(const AlgorithmConfig& cfg, const LinearGradient& grad,
                         const Vector& target, int t_steps, int record_every = 1);

}  // namespace rotlab
