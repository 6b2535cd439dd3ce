#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rotlab/bounds.hpp"
#include "rotlab/problem.hpp"

using namespace rotlab;

namespace {

Dataset make(int d, int m, double sigma, std::uint64_t seed,
             RotationSpec rot = HaarRandom{}) {
  ProblemConfig cfg;
  cfg.d = d;
  cfg.m = m;
  cfg.sigma = sigma;
  cfg.rotation = rot;
  Rng rng(seed);
  return build_dataset(cfg, rng);
}

}  // namespace

TEST_CASE("dataset: identity rotation, noise-free") {
  const Dataset ds = make(2, 1, 0.0, 1, IdentityRotation{});
  const double s = std::sqrt(2.0);
  CHECK(ds.x.isApprox(s * Matrix::Identity(2, 2), 1e-14));
  CHECK(ds.y[0] == doctest::Approx(s));
  CHECK(ds.y[1] == doctest::Approx(0.0));
}

TEST_CASE("dataset: stacked copies with orthogonal gram") {
  const Dataset ds = make(4, 3, 1.0, 2);
  CHECK(ds.x.rows() == 12);
  CHECK(ds.x.cols() == 4);
  Matrix gram = ds.x.transpose() * ds.x;
  gram.diagonal().array() -= 12.0;
  CHECK(max_abs(gram) < 1e-8 * 12.0);
  // the three blocks are identical
  CHECK(ds.x.topRows(4) == ds.x.middleRows(4, 4));
  CHECK(all_finite(ds.x));
}

TEST_CASE("dataset: explicit rotation is validated") {
  Matrix skew(2, 2);
  skew << 1.0, 0.5, 0.0, 1.0;
  ProblemConfig cfg;
  cfg.d = 2;
  cfg.rotation = ExplicitRotation{skew};
  Rng rng(3);
  CHECK_THROWS_WITH_AS(build_dataset(cfg, rng), doctest::Contains("orthogonality"),
                       std::invalid_argument);

  Matrix rot(2, 2);
  const double c = std::cos(0.3), s = std::sin(0.3);
  rot << c, -s, s, c;
  cfg.rotation = ExplicitRotation{rot};
  const Dataset ds = build_dataset(cfg, rng);
  CHECK(ds.v.isApprox(rot));
}

TEST_CASE("dataset: noise level and label decomposition (Monte Carlo)") {
  const int d = 8, m = 4, seeds = 1000;
  const double sigma = 0.5;
  double sq_sum = 0.0;
  Vector coord_sum = Vector::Zero(d);
  int count = 0;
  for (int s = 0; s < seeds; ++s) {
    const Dataset ds = make(d, m, sigma, 1000 + s);
    const Vector resid = ds.y - ds.x * ds.target;
    sq_sum += resid.squaredNorm();
    coord_sum += resid.head(d);
    count += static_cast<int>(resid.size());
  }
  const double pooled_std = std::sqrt(sq_sum / count);
  CHECK(pooled_std == doctest::Approx(sigma).epsilon(0.03));
  // pooled per-coordinate mean over N seeds ~ N(0, sigma^2/(N)) here
  const double bound = 4.0 * sigma / std::sqrt(static_cast<double>(seeds));
  CHECK(max_abs(Vector(coord_sum / seeds)) < bound);
}

TEST_CASE("dataset: the config seed drives the sampling") {
  ProblemConfig cfg;
  cfg.d = 4;
  cfg.m = 2;
  cfg.sigma = 1.0;
  cfg.seed = 99;
  const Dataset a = build_dataset(cfg);
  Rng rng(99);
  const Dataset b = build_dataset(cfg, rng);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  cfg.seed = 100;
  CHECK(build_dataset(cfg).y != a.y);
}

TEST_CASE("least squares: noise-free recovery and the noise identity") {
  const Dataset clean = make(16, 2, 0.0, 4);
  const LeastSquares ls0 = least_squares(clean);
  CHECK(max_abs(Vector(ls0.w_ls - clean.target)) < 1e-12);

  const Dataset noisy = make(16, 2, 1.0, 5);
  const LeastSquares ls = least_squares(noisy);
  const int n = noisy.n();
  const Vector via_xi = noisy.x.transpose() * noisy.xi / n;
  CHECK(max_abs(Vector(ls.zeta - via_xi)) < 1e-10);
  CHECK(ls.zeta == ls.w_ls - noisy.target);
}

TEST_CASE("least squares: mean squared noise norm is sigma^2/m") {
  const int d = 16, m = 4, seeds = 2000;
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const Dataset ds = make(d, m, 1.0, 40000 + s);
    total += least_squares(ds).zeta.squaredNorm();
  }
  const double mean = total / seeds;
  CHECK(mean == doctest::Approx(1.0 / m).epsilon(0.05));
  // 4 standard errors: std of |zeta|^2 is sqrt(2/d) sigma^2/m
  const double stderr4 = 4.0 * std::sqrt(2.0 / d) * (1.0 / m) / std::sqrt(seeds);
  CHECK(std::abs(mean - 0.25) < stderr4);
}

TEST_CASE("least squares: general normal-equations path") {
  ProblemConfig cfg;
  cfg.d = 3;
  cfg.m = 2;
  cfg.sigma = 0.5;
  Vector scale(3);
  scale << 2.0, 1.0, 0.5;
  cfg.column_scale = scale;
  Rng rng(6);
  const Dataset ds = build_dataset(cfg, rng);
  CHECK_FALSE(ds.isotropic());
  const LeastSquares ls = least_squares(ds);
  // direct solve oracle
  const Matrix gram = ds.x.transpose() * ds.x;
  const Vector direct = gram.ldlt().solve(ds.x.transpose() * ds.y);
  CHECK(max_abs(Vector(ls.w_ls - direct)) < 1e-10);
}

TEST_CASE("excess risk basics") {
  const Vector e1 = Vector::Unit(3, 0);
  CHECK(excess_risk(e1, e1) == 0.0);
  CHECK(excess_risk(Vector::Zero(3), e1) == 1.0);
  CHECK_THROWS_AS(excess_risk(Vector::Zero(2), e1), std::invalid_argument);

  const Dataset ds = make(8, 2, 1.0, 7);
  const LeastSquares ls = least_squares(ds);
  CHECK(excess_risk(ls.w_ls, ds.target) ==
        doctest::Approx(ls.zeta.squaredNorm()));
}

TEST_CASE("prediction-space risk equals weight-space risk when isotropic") {
  const Dataset ds = make(8, 2, 1.0, 8);
  Rng rng(9);
  const Vector w = sample_gaussian_vector(rng, 8);
  CHECK(prediction_excess_risk(ds, w) ==
        doctest::Approx(excess_risk(w, ds.target)).epsilon(1e-10));
}

TEST_CASE("loss gradient: stationarity and matrix oracle") {
  const Dataset ds = make(4, 3, 1.0, 10);
  const LeastSquares ls = least_squares(ds);
  CHECK(max_abs(loss_gradient(ls.w_ls, ls)) < 1e-15);

  const Dataset clean = make(4, 1, 0.0, 11);
  const LeastSquares ls0 = least_squares(clean);
  const Vector g0 = loss_gradient(Vector::Zero(4), ls0);
  CHECK(max_abs(Vector(g0 + 2.0 * clean.target)) < 1e-12);

  Rng rng(12);
  const int n = ds.n();
  for (int rep = 0; rep < 10; ++rep) {
    const Vector w = sample_gaussian_vector(rng, 4);
    const Vector direct = 2.0 / n * ds.x.transpose() * (ds.x * w - ds.y);
    CHECK(max_abs(Vector(loss_gradient(w, ls) - direct)) < 1e-9);
  }
}

TEST_CASE("loss gradient matches finite differences of the loss") {
  const Dataset ds = make(6, 2, 0.7, 13);
  const LeastSquares ls = least_squares(ds);
  const int n = ds.n();
  auto loss = [&](const Vector& w) {
    return (ds.x * w - ds.y).squaredNorm() / n;
  };
  Rng rng(14);
  const double h = 1e-6;
  for (int rep = 0; rep < 100; ++rep) {
    const Vector w = sample_gaussian_vector(rng, 6);
    const Vector g = loss_gradient(w, ls);
    for (int i = 0; i < 6; ++i) {
      Vector wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      const double fd = (loss(wp) - loss(wm)) / (2.0 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("bounds: spot values") {
  CHECK(evaluate_bounds(2, 1, 1.0, 1.0, 0.5).thm2_lower ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(evaluate_bounds(1024, 4, 1.0, 1.0, 0.5).thm2_lower ==
        doctest::Approx(1023.0 / 1024.0 * 0.2).epsilon(1e-15));
  CHECK(evaluate_bounds(64, 4, 0.0, 1.0, 0.5).thm2_lower == 0.0);

  // one-step EG bound at the acceptance preset
  const BoundsReport r = evaluate_bounds(64, 32, 1.0, 50.0, 0.5);
  CHECK(r.thm3_egpm_upper ==
        doctest::Approx(128.0 * std::exp(-50.0) + 512.0 * std::exp(-64.0)));

  const BoundsReport t4 = evaluate_bounds(16, 65, 1.0, 0.25, 0.01);
  const double lg = std::log(3200.0);
  CHECK(t4.thm4_egu_upper ==
        doctest::Approx(10.0 * lg / 1040.0 +
                        9.0 * std::exp(-32.0 / 3.0 + 2.0 * std::log(16.0))));
  CHECK(t4.appE_spindly_upper ==
        doctest::Approx(33.0 * lg / 4160.0 +
                        16.0 * std::exp(-32.0 / 3.0 + 2.0 * std::log(16.0))));

  const BoundsReport pr = evaluate_bounds(64, 16, 1.0, 1.0, 0.5);
  CHECK(pr.appF_priming_upper ==
        doctest::Approx(17.0 / 1024.0 + 32.0 / (256.0 * 64.0) +
                        4.0 * std::exp(-128.0) /
                            std::sqrt(2.0 * 3.141592653589793 * 1024.0)));

  const BoundsReport iid = evaluate_bounds(12, 4, 1.0, 1.0, 0.5);
  CHECK(iid.thm6_iid_lower ==
        doctest::Approx(std::pow(1.0 / (std::exp(1.0) * 3.0), 12.0 / 11.0)));
}

TEST_CASE("bounds: sigma = 0 conventions and validation") {
  const BoundsReport r = evaluate_bounds(16, 4, 0.0, 2.0, 0.5);
  CHECK(r.thm2_lower == 0.0);
  CHECK(r.thm6_iid_lower == 0.0);
  CHECK(r.thm3_egpm_upper == doctest::Approx(32.0 * std::exp(-2.0)));
  CHECK(r.thm4_egu_upper ==
        doctest::Approx(9.0 * std::exp(-32.0 / 3.0 + 2.0 * std::log(16.0))));
  CHECK(r.appF_priming_upper == 0.0);

  CHECK_THROWS_WITH_AS(evaluate_bounds(16, 4, 1.0, 1.0, 1.5),
                       doctest::Contains("delta"), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_bounds(1, 4, 1.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_bounds(16, 0, 1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("bounds: monotone in m and sigma") {
  for (int d : {4, 64}) {
    double prev = 1e300;
    for (int m : {1, 2, 4, 8, 16, 32}) {
      const double b = evaluate_bounds(d, m, 1.0, 1.0, 0.5).thm2_lower;
      CHECK(b < prev);
      prev = b;
    }
    double prev_s = -1.0;
    for (double sigma : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const double b = evaluate_bounds(d, 4, sigma, 1.0, 0.5).thm2_lower;
      CHECK(b > prev_s);
      prev_s = b;
    }
  }
}
