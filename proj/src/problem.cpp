#include "rotlab/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace rotlab {

namespace {

Matrix resolve_rotation(const ProblemConfig& cfg, Rng& rng) {
  if (std::holds_alternative<HaarRandom>(cfg.rotation))
    return sample_haar_orthogonal(rng, cfg.d);
  if (std::holds_alternative<IdentityRotation>(cfg.rotation))
    return Matrix::Identity(cfg.d, cfg.d);
  const Matrix& v = std::get<ExplicitRotation>(cfg.rotation).v;
  if (v.rows() != cfg.d || v.cols() != cfg.d)
    throw std::invalid_argument("build_dataset: rotation matrix must be d x d");
  if (orthogonality_defect(v) > 1e-8)
    throw std::invalid_argument(
        "build_dataset: explicit rotation fails the orthogonality check");
  return v;
}

}  // namespace

Dataset build_dataset(const ProblemConfig& cfg, Rng& rng) {
  if (cfg.d < 1) throw std::invalid_argument("build_dataset: d must be >= 1");
  if (cfg.m < 1) throw std::invalid_argument("build_dataset: m must be >= 1");
  if (cfg.sigma < 0.0)
    throw std::invalid_argument("build_dataset: sigma must be >= 0");

  Dataset ds;
  ds.sigma = cfg.sigma;
  ds.column_scale = cfg.column_scale.value_or(Vector::Ones(cfg.d));
  if (ds.column_scale.size() != cfg.d ||
      (ds.column_scale.array() <= 0.0).any())
    throw std::invalid_argument(
        "build_dataset: column_scale must be a positive length-d vector");

  ds.v = resolve_rotation(cfg, rng);
  const Matrix h =
      std::sqrt(static_cast<double>(cfg.d)) * ds.v * ds.column_scale.asDiagonal();

  const int n = cfg.m * cfg.d;
  ds.x.resize(n, cfg.d);
  for (int c = 0; c < cfg.m; ++c) ds.x.middleRows(c * cfg.d, cfg.d) = h;

  ds.target = Vector::Unit(cfg.d, 0);
  ds.xi = cfg.sigma == 0.0 ? Vector::Zero(n)
                           : sample_gaussian_vector(rng, n, 0.0, cfg.sigma);
  ds.y = ds.x * ds.target + ds.xi;
  return ds;
}

Dataset build_dataset(const ProblemConfig& cfg) {
  Rng rng(cfg.seed);
  return build_dataset(cfg, rng);
}

LeastSquares least_squares(const Dataset& ds) {
  const int n = ds.n();
  LeastSquares out;
  if (ds.isotropic()) {
    // X^T X = n I by construction.
    out.w_ls = ds.x.transpose() * ds.y / static_cast<double>(n);
  } else {
    const Matrix gram = ds.x.transpose() * ds.x;
    Eigen::LDLT<Matrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("least_squares: rank-deficient normal equations");
    const Vector diag = ldlt.vectorD();
    if (diag.minCoeff() <= 0.0 || diag.maxCoeff() / diag.minCoeff() > 1e12)
      throw std::runtime_error("least_squares: rank-deficient normal equations");
    out.w_ls = ldlt.solve(ds.x.transpose() * ds.y);
  }
  out.zeta = out.w_ls - ds.target;
  return out;
}

double excess_risk(const Vector& w, const Vector& target) {
  if (w.size() != target.size())
    throw std::invalid_argument("excess_risk: dimension mismatch");
  return (w - target).squaredNorm();
}

double prediction_excess_risk(const Dataset& ds, const Vector& w) {
  const int d = ds.d();
  const Matrix h = ds.x.topRows(d);
  return (h * (w - ds.target)).squaredNorm() / d;
}

Vector loss_gradient(const Vector& w, const LeastSquares& ls) {
  if (w.size() != ls.w_ls.size())
    throw std::invalid_argument("loss_gradient: dimension mismatch");
  return 2.0 * (w - ls.w_ls);
}

LinearGradient LinearGradient::from_least_squares(const LeastSquares& ls) {
  LinearGradient g;
  g.isotropic_ = true;
  g.w_star_ = ls.w_ls;
  g.dim_ = static_cast<int>(ls.w_ls.size());
  return g;
}

LinearGradient LinearGradient::from_data(const Matrix& x, const Vector& y) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  LinearGradient g;
  g.dim_ = d;
  Matrix gram = x.transpose() * x;
  Matrix defect = gram - static_cast<double>(n) * Matrix::Identity(d, d);
  if (max_abs(defect) < 1e-8 * n) {
    g.isotropic_ = true;
    g.w_star_ = x.transpose() * y / static_cast<double>(n);
  } else {
    g.isotropic_ = false;
    g.a_ = 2.0 / n * gram;
    g.b_ = 2.0 / n * (x.transpose() * y);
    Eigen::LDLT<Matrix> ldlt(gram);
    g.w_star_ = ldlt.solve(x.transpose() * y);
  }
  return g;
}

Vector LinearGradient::operator()(const Vector& w) const {
  if (isotropic_) return 2.0 * (w - w_star_);
  return a_ * w - b_;
}

}  // namespace rotlab
