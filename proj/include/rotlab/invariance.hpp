#pragma once

#include <vector>

#include "rotlab/optimizers.hpp"

namespace rotlab {

/// A trainable learner: algorithm + hyperparameters + step budget. Training
/// is a pure function of (X, y), so rotation checks at matched seeds reduce
/// to exact comparisons.
struct LearnerHandle {
  AlgorithmConfig algo;
  int train_steps = 200;

  /// Weight vector learned from (X, y). Iterative learners start from their
  /// standard initialization and use the exact design gradient.
  [[nodiscard]] Vector train(const Matrix& x, const Vector& y) const;

  [[nodiscard]] double predict(const Vector& w, const Vector& x) const {
    return w.dot(x);
  }
};

struct InvarianceReport {
  double max_deviation = 0.0;
  std::vector<double> per_rotation;
  int rotations = 0;
  double tol = 0.0;
  bool invariant = false;
};

/// Same dataset with inputs rotated, X' = X U^T, labels unchanged; the
/// equivalent target rotates to U * target. U must be orthogonal to 1e-8.
Dataset rotate_problem(const Dataset& ds, const Matrix& u);

/// For each of `rotations` Haar rotations U and every test point x
/// (the d rows of one design block plus 8 random unit vectors), compares
/// predict(train(X U^T, y), U x) against predict(train(X, y), x).
InvarianceReport rotation_invariance_check(const LearnerHandle& learner,
                                           const Dataset& ds, int rotations,
                                           double tol, Rng& rng);

struct PcReport {
  double original_risk = 0.0;
  double rotated_risk = 0.0;
  bool degenerate_spectrum = false;
};

/// The first-principal-component learner on X = [H;...;H] Diag(p) with
/// p = (p1_scale, 1, ..., 1): near-zero risk on the original inputs, large
/// risk once the inputs are rotated. An isotropic spectrum (p = 1) sets the
/// degenerate flag instead of returning a direction.
PcReport pc_counterexample(int d, int m, double sigma, Rng& rng,
                           double p1_scale = 2.0);

/// Top eigenvector of the symmetric positive semi-definite `a` by power
/// iteration (relative residual 1e-12, at most 10^4 iterations), sign fixed
/// by the first nonzero coordinate.
Vector top_principal_component(const Matrix& a);

struct AnisotropicRun {
  Algorithm id{};
  std::vector<Vector> trajectory;
  double min_distance = 0.0;  // min_t |w_t - e1|
};

struct AnisotropicDemo {
  Matrix rotation;  // identity when rotate_input is false
  Vector w_ls;      // least-squares solution of the comparison problem
  /// max_t |w'_t - U w_t| for gradient descent trained on (X U^T, y) vs
  /// (X, y) with shared labels: rotating the inputs rotates the trajectory.
  double gd_rotation_identity_dev = 0.0;
  std::vector<AnisotropicRun> runs;
};

/// 2-d demonstration on X = sqrt(2) V Diag(scale) (optionally right-rotated
/// by a Haar U; labels are regenerated from the rotated design so the sparse
/// target stays e1). Records each algorithm's trajectory and its minimum
/// distance to the target.
AnisotropicDemo anisotropic_demo(const Vector& scale, bool rotate_input,
                                 const std::vector<AlgorithmConfig>& algorithms,
                                 int horizon, Rng& rng, double sigma = 0.3,
                                 int m = 1);

}  // namespace rotlab
