#include "rotlab/linalg.hpp"

#include <stdexcept>

namespace rotlab {

Vector sample_gaussian_vector(Rng& rng, int n, double mean, double std) {
  if (n < 1) throw std::invalid_argument("sample_gaussian_vector: n must be >= 1");
  if (std < 0.0)
    throw std::invalid_argument("sample_gaussian_vector: std must be >= 0");
  Vector out(n);
  for (int i = 0; i < n; ++i) out[i] = mean + std * rng.next_gaussian();
  return out;
}

Matrix sample_haar_orthogonal(Rng& rng, int d) {
  if (d < 1) throw std::invalid_argument("sample_haar_orthogonal: d must be >= 1");
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.next_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

bool all_finite(const Vector& v) { return v.allFinite(); }
bool all_finite(const Matrix& m) { return m.allFinite(); }

double orthogonality_defect(const Matrix& a) {
  Matrix gram = a.transpose() * a;
  gram.diagonal().array() -= 1.0;
  return gram.cwiseAbs().maxCoeff();
}

}  // namespace rotlab
