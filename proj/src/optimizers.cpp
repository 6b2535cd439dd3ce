#include "rotlab/optimizers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rotlab {

// --- gradient descent -------------------------------------------------------

GdState gd_step(const GdState& s, const LinearGradient& grad) {
  if (s.eta <= 0.0) throw std::invalid_argument("gd_step: eta must be > 0");
  return {s.w - s.eta * grad(s.w), s.eta};
}
GdState gd_step(const GdState& s, const LeastSquares& ls) {
  return gd_step(s, LinearGradient::from_least_squares(ls));
}

// --- EG+- -------------------------------------------------------------------

EgPmState EgPmState::uniform_init(int d, double eta) {
  EgPmState s;
  s.v_plus = Vector::Constant(d, 1.0 / (2.0 * d));
  s.v_minus = s.v_plus;
  s.eta = eta;
  return s;
}

EgPmState eg_pm_step(const EgPmState& s, const LinearGradient& grad) {
  const Vector g = grad(s.weights());
  // Work in log space with a max shift; eta up to a few hundred must not
  // overflow the exponentials before normalization.
  Vector log_p = s.v_plus.array().log() - s.eta * g.array();
  Vector log_m = s.v_minus.array().log() + s.eta * g.array();
  const double shift = std::max(log_p.maxCoeff(), log_m.maxCoeff());
  Vector vp = (log_p.array() - shift).exp();
  Vector vm = (log_m.array() - shift).exp();
  const double z = vp.sum() + vm.sum();
  EgPmState out;
  out.v_plus = vp / z;
  out.v_minus = vm / z;
  out.eta = s.eta;
  return out;
}
EgPmState eg_pm_step(const EgPmState& s, const LeastSquares& ls) {
  return eg_pm_step(s, LinearGradient::from_least_squares(ls));
}

// --- approximated EGU+- -----------------------------------------------------

ApproxEguState approx_egu_pm_step(const ApproxEguState& s,
                                  const LinearGradient& grad) {
  if (s.beta <= 0.0)
    throw std::invalid_argument("approx_egu_pm_step: beta must be > 0");
  const Vector g = grad(s.w);
  const Vector rate =
      (s.w.array().square() + 4.0 * s.beta * s.beta).sqrt().matrix();
  ApproxEguState out = s;
  out.w = s.w - s.eta * rate.cwiseProduct(g);
  return out;
}
ApproxEguState approx_egu_pm_step(const ApproxEguState& s,
                                  const LeastSquares& ls) {
  return approx_egu_pm_step(s, LinearGradient::from_least_squares(ls));
}

// --- EGU --------------------------------------------------------------------

Vector egu_step(const Vector& w, const LinearGradient& grad, double eta) {
  if ((w.array() <= 0.0).any())
    throw std::domain_error("egu_step: weights must be strictly positive");
  const Vector g = grad(w);
  return w.cwiseProduct((-eta * g.array()).exp().matrix());
}
Vector egu_step(const Vector& w, const LeastSquares& ls, double eta) {
  return egu_step(w, LinearGradient::from_least_squares(ls), eta);
}

// --- spindly ----------------------------------------------------------------

SpindlyState SpindlyState::standard_init(int d, double eta) {
  SpindlyState s;
  s.u = Vector::Constant(d, std::sqrt(2.0 / d));
  s.v = Vector::Zero(d);
  s.eta = eta;
  return s;
}

SpindlyState spindly_step(const SpindlyState& s, const LinearGradient& grad) {
  const Vector g = grad(s.weights());
  SpindlyState out;
  // Jacobi update: both right-hand sides use the old u, v.
  out.u = s.u - s.eta * g.cwiseProduct(s.v);
  out.v = s.v - s.eta * g.cwiseProduct(s.u);
  out.eta = s.eta;
  return out;
}
SpindlyState spindly_step(const SpindlyState& s, const LeastSquares& ls) {
  return spindly_step(s, LinearGradient::from_least_squares(ls));
}

// --- adagrad ----------------------------------------------------------------

AdagradState AdagradState::zero_init(int d, double eta, double beta_pre,
                                     double eps) {
  AdagradState s;
  s.w = Vector::Zero(d);
  s.g_acc = Vector::Constant(d, eps);
  s.beta_pre = beta_pre;
  s.eps = eps;
  s.eta = eta;
  return s;
}

AdagradState adagrad_step(const AdagradState& s, const LinearGradient& grad) {
  if (s.eps <= 0.0) throw std::invalid_argument("adagrad_step: eps must be > 0");
  const Vector g = grad(s.w);
  AdagradState out = s;
  out.g_acc = s.g_acc + s.beta_pre * g.cwiseAbs2();
  out.w = s.w - s.eta * g.cwiseQuotient(out.g_acc.cwiseSqrt());
  return out;
}
AdagradState adagrad_step(const AdagradState& s, const LeastSquares& ls) {
  return adagrad_step(s, LinearGradient::from_least_squares(ls));
}

// --- incremental priming ----------------------------------------------------

IncPrimingState inc_priming_step(const IncPrimingState& s,
                                 const LinearGradient& grad) {
  const Vector g = grad(s.p);
  IncPrimingState out = s;
  out.p = s.p - s.eta * s.p.cwiseAbs2().cwiseProduct(g);
  return out;
}
IncPrimingState inc_priming_step(const IncPrimingState& s,
                                 const LeastSquares& ls) {
  return inc_priming_step(s, LinearGradient::from_least_squares(ls));
}

// --- exact EGU+- ------------------------------------------------------------

Vector EguPmExactState::v_plus() const {
  return beta * (-eta * grad_sum.array()).exp();
}
Vector EguPmExactState::v_minus() const {
  return beta * (eta * grad_sum.array()).exp();
}

EguPmExactState egu_pm_exact_step(const EguPmExactState& s,
                                  const LinearGradient& grad) {
  if (s.beta <= 0.0)
    throw std::invalid_argument("egu_pm_exact_step: beta must be > 0");
  EguPmExactState out = s;
  out.grad_sum = s.grad_sum + grad(s.weights());
  return out;
}

// --- closed-form solvers ----------------------------------------------------

Vector ridge_solve(const Matrix& x, const Vector& y, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("ridge_solve: lambda must be >= 0");
  Matrix a = x.transpose() * x;
  a.diagonal().array() += lambda;
  Eigen::LDLT<Matrix> ldlt(a);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("ridge_solve: singular system");
  const Vector diag = ldlt.vectorD();
  if (diag.minCoeff() <= 0.0 || diag.maxCoeff() / diag.minCoeff() > 1e14)
    throw std::runtime_error("ridge_solve: singular system");
  return ldlt.solve(x.transpose() * y);
}
Vector ridge_solve(const Dataset& ds, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("ridge_solve: lambda must be >= 0");
  if (ds.isotropic()) {
    // X^T X = n I by construction, so the solve is a single mat-vec
    return ds.x.transpose() * ds.y / (static_cast<double>(ds.n()) + lambda);
  }
  return ridge_solve(ds.x, ds.y, lambda);
}

Vector priming_solve(const Matrix& x, const Vector& y, double lambda) {
  if (lambda < 0.0)
    throw std::invalid_argument("priming_solve: lambda must be >= 0");
  const int d = static_cast<int>(x.cols());
  const int n = static_cast<int>(x.rows());
  const Vector w_ls = [&] {
    Matrix gram = x.transpose() * x;
    Matrix defect = gram - static_cast<double>(n) * Matrix::Identity(d, d);
    if (max_abs(defect) < 1e-8 * n)
      return Vector(x.transpose() * y / static_cast<double>(n));
    return Vector(Eigen::LDLT<Matrix>(gram).solve(x.transpose() * y));
  }();

  // Solve on the support of w_ls; zero coordinates stay zero (the limit of
  // infinite regularization along those axes).
  std::vector<int> support;
  for (int i = 0; i < d; ++i)
    if (w_ls[i] != 0.0) support.push_back(i);

  const int k = static_cast<int>(support.size());
  Vector out = Vector::Zero(d);
  if (k == 0) return out;

  Matrix xs(n, k);
  Vector ws(k);
  for (int j = 0; j < k; ++j) {
    xs.col(j) = x.col(support[j]);
    ws[j] = w_ls[support[j]];
  }
  Matrix a = ws.asDiagonal() * (xs.transpose() * xs) * ws.asDiagonal();
  a.diagonal().array() += lambda;
  const Vector b = ws.asDiagonal() * (xs.transpose() * y);
  Eigen::LDLT<Matrix> ldlt(a);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("priming_solve: singular rescaled system");
  const Vector sol = ws.asDiagonal() * ldlt.solve(b);
  for (int j = 0; j < k; ++j) out[support[j]] = sol[j];
  return out;
}
Vector priming_solve(const Dataset& ds, double lambda) {
  if (lambda < 0.0)
    throw std::invalid_argument("priming_solve: lambda must be >= 0");
  if (ds.isotropic()) {
    // coordinatewise: (n + lambda w_ls^-2)^-1 (X^T y)_i, zeros staying zero
    const double n = static_cast<double>(ds.n());
    const Vector xty = ds.x.transpose() * ds.y;
    const Vector w_ls = xty / n;
    Vector out(ds.d());
    for (int i = 0; i < ds.d(); ++i) {
      const double w2 = w_ls[i] * w_ls[i];
      out[i] = w_ls[i] == 0.0 ? 0.0 : w2 * xty[i] / (n * w2 + lambda);
    }
    return out;
  }
  return priming_solve(ds.x, ds.y, lambda);
}

// --- driver -----------------------------------------------------------------

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kGd: return "gd";
    case Algorithm::kEgPm: return "eg_pm";
    case Algorithm::kApproxEguPm: return "approx_egu_pm";
    case Algorithm::kEgu: return "egu";
    case Algorithm::kSpindly: return "spindly";
    case Algorithm::kAdagrad: return "adagrad";
    case Algorithm::kIncPriming: return "inc_priming";
    case Algorithm::kRidge: return "ridge";
    case Algorithm::kPriming: return "priming";
    case Algorithm::kPcWeight: return "pc_weight";
  }
  return "unknown";
}

namespace {

double resolved_beta(const AlgorithmConfig& cfg, int d) {
  return cfg.beta > 0.0 ? cfg.beta : 1.0 / (2.0 * d);
}

}  // namespace

Trajectory run_optimizer(const AlgorithmConfig& cfg, const LinearGradient& grad,
                         const Vector& target, int t_steps, int record_every) {
  if (t_steps < 1)
    throw std::invalid_argument("run_optimizer: step count must be >= 1");
  if (record_every < 1)
    throw std::invalid_argument("run_optimizer: record_every must be >= 1");
  const int d = grad.dim();

  // One mutable state per family; step() advances it and returns w.
  GdState gd{Vector::Zero(d), cfg.eta};
  EgPmState eg = EgPmState::uniform_init(d, cfg.eta);
  ApproxEguState aeg{Vector::Zero(d), resolved_beta(cfg, d), cfg.eta};
  Vector egu_w = cfg.init_w.value_or(Vector::Constant(d, 1.0 / (2.0 * d)));
  SpindlyState sp = SpindlyState::standard_init(d, cfg.eta);
  AdagradState ada = AdagradState::zero_init(d, cfg.eta, cfg.beta_pre, cfg.eps);
  IncPrimingState inc{cfg.init_w.value_or(Vector::Ones(d)), cfg.eta};

  auto current = [&]() -> Vector {
    switch (cfg.id) {
      case Algorithm::kGd: return gd.w;
      case Algorithm::kEgPm: return eg.weights();
      case Algorithm::kApproxEguPm: return aeg.w;
      case Algorithm::kEgu: return egu_w;
      case Algorithm::kSpindly: return sp.weights();
      case Algorithm::kAdagrad: return ada.w;
      case Algorithm::kIncPriming: return inc.p;
      default:
        throw std::invalid_argument(
            "run_optimizer: " + algorithm_name(cfg.id) +
            " is a closed-form learner, not an iterative one");
    }
  };
  auto advance = [&]() {
    switch (cfg.id) {
      case Algorithm::kGd: gd = gd_step(gd, grad); break;
      case Algorithm::kEgPm: eg = eg_pm_step(eg, grad); break;
      case Algorithm::kApproxEguPm: aeg = approx_egu_pm_step(aeg, grad); break;
      case Algorithm::kEgu: egu_w = egu_step(egu_w, grad, cfg.eta); break;
      case Algorithm::kSpindly: sp = spindly_step(sp, grad); break;
      case Algorithm::kAdagrad: ada = adagrad_step(ada, grad); break;
      case Algorithm::kIncPriming: inc = inc_priming_step(inc, grad); break;
      default: break;
    }
  };

  Trajectory traj;
  traj.id = cfg.id;
  double running_min = std::numeric_limits<double>::infinity();
  Vector w = current();
  running_min = std::min(running_min, excess_risk(w, target));
  traj.points.push_back({0, w, excess_risk(w, target), running_min});

  for (int t = 1; t <= t_steps; ++t) {
    try {
      advance();
    } catch (const std::exception& e) {
      throw std::runtime_error("run_optimizer: step " + std::to_string(t) +
                               ": " + e.what());
    }
    w = current();
    const double risk = excess_risk(w, target);
    running_min = std::min(running_min, risk);
    if (t % record_every == 0 || t == t_steps)
      traj.points.push_back({t, w, risk, running_min});
  }
  traj.final_excess = traj.points.back().excess;
  traj.min_excess = running_min;
  return traj;
}

Trajectory run_optimizer(const AlgorithmConfig& cfg, const Dataset& ds, int t_steps,
                         int record_every) {
  const LinearGradient grad =
      ds.isotropic() ? LinearGradient::from_least_squares(least_squares(ds))
                     : LinearGradient::from_data(ds.x, ds.y);
  return run_optimizer(cfg, grad, ds.target, t_steps, record_every);
}

}  // namespace rotlab
