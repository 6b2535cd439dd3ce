#include "rotlab/lambert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rotlab {

namespace {

// Series around the branch point x = -1/e in p = sqrt(2(e*x + 1)).
double branch_point_series(double p) {
  const double p2 = p * p;
  return -1.0 + p - p2 / 3.0 + 11.0 / 72.0 * p2 * p - 43.0 / 540.0 * p2 * p2 +
         769.0 / 17280.0 * p2 * p2 * p;
}

}  // namespace

double lambert_w0(double x) {
  static const double kInvE = std::exp(-1.0);
  if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
  if (x < -kInvE) {
    // Allow arguments at the branch point up to rounding noise.
    if (x > -kInvE - 4e-16) return -1.0;
    throw std::domain_error("lambert_w0: argument " + std::to_string(x) +
                            " below -1/e");
  }
  if (x == 0.0) return 0.0;

  double w;
  if (x < -0.3) {
    w = branch_point_series(std::sqrt(2.0 * (std::exp(1.0) * x + 1.0)));
  } else {
    // Winitzki's global approximation, then Halley.
    const double l1 = std::log1p(x);
    w = l1 * (1.0 - std::log1p(l1) / (2.0 + l1));
  }

  const double tol = 1e-13 * std::max(std::abs(x), 1e-300);
  for (int it = 0; it < 40; ++it) {
    if (std::abs(w + 1.0) < 1e-8) return w;  // Halley degenerates at the branch
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= tol) return w;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) {
      const double resid = std::abs(w * std::exp(w) - x);
      if (resid <= 1e-10 * std::max(1.0, std::abs(x))) return w;
    }
  }
  throw std::runtime_error("lambert_w0: Halley iteration failed to converge");
}

}  // namespace rotlab
