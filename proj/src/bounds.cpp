#include "rotlab/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace rotlab {

namespace {

// exp(-a/b) with the b -> 0+ limit, so sigma = 0 gives exactly 0.
double exp_neg_ratio(double a, double b) {
  if (b == 0.0) return 0.0;
  return std::exp(-a / b);
}

}  // namespace

BoundsReport evaluate_bounds(int d, int m, double sigma, double eta,
                             double delta) {
  if (d < 2) throw std::invalid_argument("evaluate_bounds: d must be >= 2");
  if (m < 1) throw std::invalid_argument("evaluate_bounds: m must be >= 1");
  if (sigma < 0.0)
    throw std::invalid_argument("evaluate_bounds: sigma must be >= 0");
  if (eta <= 0.0) throw std::invalid_argument("evaluate_bounds: eta must be > 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("evaluate_bounds: delta must lie in (0,1)");

  const double dd = d;
  const double md = static_cast<double>(m) * d;
  const double s2 = sigma * sigma;

  BoundsReport r;
  r.d = d;
  r.m = m;
  r.sigma = sigma;
  r.eta = eta;
  r.delta = delta;

  r.thm2_lower = (dd - 1.0) / dd * s2 / (s2 + m);

  r.thm6_iid_lower =
      s2 == 0.0 ? 0.0
                : std::pow(s2 / (std::exp(1.0) * (s2 + 0.5 * m)), dd / (dd - 1.0));

  r.thm3_egpm_upper =
      2.0 * dd * std::exp(-eta) + 8.0 * dd * exp_neg_ratio(md, 32.0 * s2);

  const double log_2d_delta = std::log(2.0 * dd / delta);
  const double dim_tail = std::exp(-8.0 / 3.0 * std::sqrt(dd) + 2.0 * std::log(dd));
  r.thm4_egu_upper = 10.0 * s2 * log_2d_delta / md + 9.0 * dim_tail;
  r.appE_spindly_upper = 33.0 * s2 * log_2d_delta / (4.0 * md) + 16.0 * dim_tail;

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  r.appF_priming_upper = 17.0 * s2 / md + 32.0 * s2 * s2 / (m * md) +
                         4.0 * sigma * exp_neg_ratio(md, 8.0 * s2) /
                             std::sqrt(kTwoPi * md);
  return r;
}

}  // namespace rotlab
