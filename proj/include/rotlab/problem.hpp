#pragma once

#include <optional>
#include <variant>

#include "rotlab/linalg.hpp"
#include "rotlab/rng.hpp"

namespace rotlab {

/// How the d x d rotation V of the design matrix is chosen.
struct HaarRandom {};
struct IdentityRotation {};
struct ExplicitRotation {
  Matrix v;
};
using RotationSpec = std::variant<HaarRandom, IdentityRotation, ExplicitRotation>;

/// Identity of one sparse-regression experiment: the design is m stacked
/// copies of sqrt(d)*V*Diag(column_scale), labels are the first feature
/// plus N(0, sigma^2) noise.
struct ProblemConfig {
  int d = 2;
  int m = 1;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  RotationSpec rotation = HaarRandom{};
  std::optional<Vector> column_scale;  // default all-ones (isotropic)
};

struct Dataset {
  Matrix x;        // (m*d) x d
  Vector y;        // m*d
  Matrix v;        // the d x d rotation used
  Vector xi;       // label noise draw (debug hook)
  Vector target;   // e1 unless the problem was rotated
  Vector column_scale;
  double sigma = 0.0;

  [[nodiscard]] int d() const { return static_cast<int>(x.cols()); }
  [[nodiscard]] int n() const { return static_cast<int>(x.rows()); }
  [[nodiscard]] bool isotropic() const {
    return (column_scale.array() == 1.0).all();
  }
};

struct LeastSquares {
  Vector w_ls;
  Vector zeta;  // w_ls - target
};

Dataset build_dataset(const ProblemConfig& cfg, Rng& rng);

/// Seeds the generator from cfg.seed. Experiment drivers that fan out over
/// many datasets should derive sub-streams themselves and use the overload.
Dataset build_dataset(const ProblemConfig& cfg);

/// Minimizer of |Xw - y|^2. Uses X^T y / n when X^T X = n I (up to 1e-8
/// relative), otherwise solves the normal equations by Cholesky; throws
/// std::runtime_error on rank deficiency / condition number above 1e12.
LeastSquares least_squares(const Dataset& ds);

/// Weight-space excess risk |w - target|^2.
double excess_risk(const Vector& w, const Vector& target);

/// Prediction-space excess risk (1/d)|H(w - target)|^2 / m with H one block
/// of the design; differs from excess_risk only under column scaling.
double prediction_excess_risk(const Dataset& ds, const Vector& w);

/// Gradient of the mean squared loss for the isotropic design: 2(w - w_ls).
Vector loss_gradient(const Vector& w, const LeastSquares& ls);

/// grad L(w) = (2/n) X^T (X w - y) = a_scale * (A w) - b, precomputed so a
/// step costs one mat-vec (or one axpy in the isotropic case).
class LinearGradient {
 public:
  static LinearGradient from_least_squares(const LeastSquares& ls);
  static LinearGradient from_data(const Matrix& x, const Vector& y);

  [[nodiscard]] Vector operator()(const Vector& w) const;
  [[nodiscard]] int dim() const { return dim_; }
  /// Point where the gradient vanishes.
  [[nodiscard]] const Vector& minimizer() const { return w_star_; }

 private:
  bool isotropic_ = true;
  Matrix a_;       // (2/n) X^T X, general case only
  Vector b_;       // (2/n) X^T y
  Vector w_star_;  // argmin
  int dim_ = 0;
};

}  // namespace rotlab
