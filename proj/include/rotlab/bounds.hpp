#pragma once

namespace rotlab {

/// Closed-form excess-risk bounds for the stacked-rotation regression
/// problem, evaluated verbatim. Lower bounds constrain every
/// rotation-invariant learner; the upper bounds are per-algorithm.
struct BoundsReport {
  double thm2_lower = 0.0;         // (d-1)/d * s^2/(s^2+m)
  double thm6_iid_lower = 0.0;     // (s^2/(e(s^2+m/2)))^(d/(d-1))
  double thm3_egpm_upper = 0.0;    // 2d e^-eta + 8d e^(-md/(32 s^2))
  double thm4_egu_upper = 0.0;     // 10 s^2 ln(2d/delta)/(md) + 9 e^(-8/3 sqrt(d) + 2 ln d)
  double appE_spindly_upper = 0.0; // 33 s^2 ln(2d/delta)/(4md) + 16 e^(-8/3 sqrt(d) + 2 ln d)
  double appF_priming_upper = 0.0; // 17 s^2/(md) + 32 s^4/(m^2 d) + tail
  // echoed inputs
  int d = 0;
  int m = 0;
  double sigma = 0.0;
  double eta = 0.0;
  double delta = 0.0;
};

/// Evaluates all bounds. Requires d >= 2, m >= 1, sigma >= 0, eta > 0,
/// delta in (0,1); sigma = 0 sends the noise-driven exponential terms to 0.
BoundsReport evaluate_bounds(int d, int m, double sigma, double eta,
                             double delta);

}  // namespace rotlab
