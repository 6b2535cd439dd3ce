#pragma once

#include <Eigen/Dense>

#include "rotlab/rng.hpp"

namespace rotlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// n i.i.d. draws from N(mean, std^2). Throws std::invalid_argument on
/// std < 0 or n < 1.
Vector sample_gaussian_vector(Rng& rng, int n, double mean = 0.0,
                              double std = 1.0);

/// d x d orthogonal matrix distributed by Haar measure: QR of a standard
/// Gaussian matrix with the Q columns re-signed by the diagonal of R.
/// (Without the sign correction the law of plain QR is not Haar.)
Matrix sample_haar_orthogonal(Rng& rng, int d);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

/// max_ij |(A^T A - I)_ij|
double orthogonality_defect(const Matrix& a);

inline double max_abs(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}
inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace rotlab
