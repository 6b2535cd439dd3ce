#include "rotlab/invariance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rotlab {

Vector LearnerHandle::train(const Matrix& x, const Vector& y) const {
  switch (algo.id) {
    case Algorithm::kRidge:
      if (algo.lambda < 0.0)
        throw std::invalid_argument("LearnerHandle: ridge lambda unset");
      return ridge_solve(x, y, algo.lambda);
    case Algorithm::kPriming:
      if (algo.lambda < 0.0)
        throw std::invalid_argument("LearnerHandle: priming lambda unset");
      return priming_solve(x, y, algo.lambda);
    case Algorithm::kPcWeight:
      return top_principal_component(x.transpose() * x);
    default: {
      const LinearGradient grad = LinearGradient::from_data(x, y);
      const Vector target = Vector::Zero(x.cols());  // risk values unused here
      const Trajectory traj =
          run_optimizer(algo, grad, target, train_steps, train_steps);
      return traj.points.back().w;
    }
  }
}

Dataset rotate_problem(const Dataset& ds, const Matrix& u) {
  if (u.rows() != ds.d() || u.cols() != ds.d())
    throw std::invalid_argument("rotate_problem: rotation must be d x d");
  if (orthogonality_defect(u) > 1e-8)
    throw std::invalid_argument("rotate_problem: matrix is not orthogonal");
  Dataset out = ds;
  out.x = ds.x * u.transpose();
  out.v = ds.v * u.transpose();
  out.target = u * ds.target;
  return out;
}

InvarianceReport rotation_invariance_check(const LearnerHandle& learner,
                                           const Dataset& ds, int rotations,
                                           double tol, Rng& rng) {
  if (rotations < 1)
    throw std::invalid_argument("rotation_invariance_check: rotations >= 1");
  const int d = ds.d();

  std::vector<Vector> test_points;
  for (int i = 0; i < d; ++i) test_points.push_back(ds.x.row(i).transpose());
  for (int i = 0; i < 8; ++i) {
    Vector v = sample_gaussian_vector(rng, d);
    test_points.push_back(v / v.norm());
  }

  const Vector w_base = learner.train(ds.x, ds.y);

  InvarianceReport rep;
  rep.rotations = rotations;
  rep.tol = tol;
  for (int r = 0; r < rotations; ++r) {
    const Matrix u = sample_haar_orthogonal(rng, d);
    Vector w_rot;
    try {
      w_rot = learner.train(ds.x * u.transpose(), ds.y);
    } catch (const std::exception& e) {
      throw std::runtime_error("rotation_invariance_check: rotation " +
                               std::to_string(r) + ": " + e.what());
    }
    double dev = 0.0;
    for (const Vector& x : test_points) {
      const double base = learner.predict(w_base, x);
      const double rot = learner.predict(w_rot, u * x);
      dev = std::max(dev, std::abs(rot - base));
    }
    rep.per_rotation.push_back(dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  rep.invariant = rep.max_deviation <= tol;
  return rep;
}

Vector top_principal_component(const Matrix& a) {
  const int d = static_cast<int>(a.rows());
  const double mean_eig = a.trace() / d;
  Matrix defect = a - mean_eig * Matrix::Identity(d, d);
  if (max_abs(defect) <= 1e-9 * std::abs(mean_eig))
    throw std::domain_error("top_principal_component: degenerate spectrum");

  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = 1.0 + static_cast<double>(i + 1) / d;
  v /= v.norm();
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < 10000; ++it) {
    Vector av = a * v;
    lambda = v.dot(av);
    if ((av - lambda * v).norm() <= 1e-12 * std::abs(lambda)) {
      converged = true;
      break;
    }
    v = av / av.norm();
  }
  if (!converged)
    throw std::runtime_error("top_principal_component: power iteration failed");
  for (int i = 0; i < d; ++i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

PcReport pc_counterexample(int d, int m, double sigma, Rng& rng,
                           double p1_scale) {
  if (d < 2) throw std::invalid_argument("pc_counterexample: d must be >= 2");
  Vector scale = Vector::Ones(d);
  scale[0] = p1_scale;

  ProblemConfig cfg;
  cfg.d = d;
  cfg.m = m;
  cfg.sigma = sigma;
  cfg.column_scale = scale;
  const Dataset ds = build_dataset(cfg, rng);

  PcReport rep;
  auto aligned_pc = [&](const Matrix& x) -> Vector {
    Vector pc = top_principal_component(x.transpose() * x);
    if (pc[0] < 0.0) pc = -pc;  // sign-align with the target axis
    return pc;
  };

  try {
    rep.original_risk = excess_risk(aligned_pc(ds.x), ds.target);
    const Matrix u = sample_haar_orthogonal(rng, d);
    rep.rotated_risk = excess_risk(aligned_pc(ds.x * u.transpose()), ds.target);
  } catch (const std::domain_error&) {
    rep.degenerate_spectrum = true;
  }
  return rep;
}

AnisotropicDemo anisotropic_demo(const Vector& scale, bool rotate_input,
                                 const std::vector<AlgorithmConfig>& algorithms,
                                 int horizon, Rng& rng, double sigma, int m) {
  if (scale.size() != 2)
    throw std::invalid_argument("anisotropic_demo: the demonstration is 2-d");

  ProblemConfig cfg;
  cfg.d = 2;
  cfg.m = m;
  cfg.sigma = sigma;
  cfg.column_scale = scale;
  const Dataset ds = build_dataset(cfg, rng);

  AnisotropicDemo demo;
  demo.rotation =
      rotate_input ? sample_haar_orthogonal(rng, 2) : Matrix::Identity(2, 2);

  // Shared-label check: gradient descent on (X U^T, y) retraces U w_t.
  {
    AlgorithmConfig gd;
    gd.id = Algorithm::kGd;
    gd.eta = 0.05;
    const LinearGradient g_base = LinearGradient::from_data(ds.x, ds.y);
    const LinearGradient g_rot =
        LinearGradient::from_data(ds.x * demo.rotation.transpose(), ds.y);
    const Vector e1 = Vector::Unit(2, 0);
    const Trajectory base = run_optimizer(gd, g_base, e1, horizon, 1);
    const Trajectory rot = run_optimizer(gd, g_rot, e1, horizon, 1);
    for (std::size_t i = 0; i < base.points.size(); ++i) {
      const Vector dev = rot.points[i].w - demo.rotation * base.points[i].w;
      demo.gd_rotation_identity_dev =
          std::max(demo.gd_rotation_identity_dev, max_abs(dev));
    }
  }

  // Comparison problem: rotated design, labels regenerated from it, so the
  // sparse target stays e1 while the input covariance rotates.
  const Matrix x_rot = ds.x * demo.rotation.transpose();
  const Vector y_rot = x_rot.col(0) + ds.xi;
  const LinearGradient grad = LinearGradient::from_data(x_rot, y_rot);
  const Vector target = Vector::Unit(2, 0);
  demo.w_ls = grad.minimizer();

  for (const AlgorithmConfig& algo : algorithms) {
    const Trajectory traj = run_optimizer(algo, grad, target, horizon, 1);
    AnisotropicRun run;
    run.id = algo.id;
    run.min_distance = std::numeric_limits<double>::infinity();
    for (const TrajectoryPoint& pt : traj.points) {
      run.trajectory.push_back(pt.w);
      run.min_distance = std::min(run.min_distance, (pt.w - target).norm());
    }
    demo.runs.push_back(std::move(run));
  }
  return demo;
}

}  // namespace rotlab
