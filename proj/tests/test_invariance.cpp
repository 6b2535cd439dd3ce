#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rotlab/invariance.hpp"
#include "rotlab/verification.hpp"

using namespace rotlab;

namespace {

Dataset make(int d, int m, double sigma, std::uint64_t seed) {
  ProblemConfig cfg;
  cfg.d = d;
  cfg.m = m;
  cfg.sigma = sigma;
  Rng rng(seed);
  return build_dataset(cfg, rng);
}

LearnerHandle gd_learner(double eta = 0.05, int steps = 200) {
  LearnerHandle h;
  h.algo.id = Algorithm::kGd;
  h.algo.eta = eta;
  h.train_steps = steps;
  return h;
}

}  // namespace

TEST_CASE("rotate_problem: identity, inverse recovery, validation") {
  const Dataset ds = make(6, 2, 1.0, 50);
  const Dataset same = rotate_problem(ds, Matrix::Identity(6, 6));
  CHECK(same.x == ds.x);
  CHECK(same.y == ds.y);

  Rng rng(51);
  const Matrix u = sample_haar_orthogonal(rng, 6);
  const Dataset rot = rotate_problem(ds, u);
  CHECK(max_abs(Matrix(rot.x * u - ds.x)) < 1e-10);
  CHECK(max_abs(Vector(rot.target - u * ds.target)) < 1e-14);

  const Dataset back = rotate_problem(rot, u.transpose());
  CHECK(max_abs(Matrix(back.x - ds.x)) < 1e-10);

  Matrix skew = Matrix::Identity(6, 6);
  skew(0, 1) = 0.01;
  CHECK_THROWS_WITH_AS(rotate_problem(ds, skew), doctest::Contains("orthogonal"),
                       std::invalid_argument);
}

TEST_CASE("gd weights transform covariantly under input rotation") {
  const Dataset ds = make(8, 2, 0.8, 52);
  Rng rng(53);
  const Matrix u = sample_haar_orthogonal(rng, 8);
  const Dataset rot = rotate_problem(ds, u);

  const LearnerHandle gd = gd_learner();
  const Vector w = gd.train(ds.x, ds.y);
  const Vector w_rot = gd.train(rot.x, rot.y);
  // back-rotated weights reproduce the unrotated risk
  CHECK(std::abs(excess_risk(Vector(u.transpose() * w_rot), ds.target) -
                 excess_risk(w, ds.target)) < 1e-8);
}

TEST_CASE("invariance verdicts: gd and ridge are invariant at 1e-8") {
  for (int d : {4, 16}) {
    const Dataset ds = make(d, 4, 1.0, 54 + d);
    Rng r1(55);
    const InvarianceReport gd =
        rotation_invariance_check(gd_learner(), ds, 20, 1e-8, r1);
    CHECK(gd.invariant);
    CHECK(gd.max_deviation <= 1e-8);
    CHECK(gd.per_rotation.size() == 20);

    LearnerHandle ridge;
    ridge.algo.id = Algorithm::kRidge;
    ridge.algo.lambda = static_cast<double>(d);  // sigma^2 d
    Rng r2(56);
    const InvarianceReport rr =
        rotation_invariance_check(ridge, ds, 20, 1e-8, r2);
    CHECK(rr.invariant);
  }
}

TEST_CASE("multiplicative-family learners break invariance (seeded witness)") {
  const Dataset ds = make(8, 4, 1.0, 57);
  LearnerHandle aegu;
  aegu.algo.id = Algorithm::kApproxEguPm;
  aegu.algo.eta = 0.25;
  aegu.train_steps = 12;  // T = 4 sqrt(d) territory
  Rng r(58);
  const InvarianceReport rep = rotation_invariance_check(aegu, ds, 5, 1e-8, r);
  CHECK_FALSE(rep.invariant);
  CHECK(rep.max_deviation > 1e-2);
}

TEST_CASE("full invariance dichotomy suite") {
  for (const CheckResult& c : verify_invariance(4242)) {
    INFO(c.name, " value=", c.value, " tol=", c.tol);
    CHECK(c.pass);
  }
}

TEST_CASE("pc counterexample: optimal on original axes, lost after rotation") {
  Rng rng(59);
  int large = 0, total = 100;
  double max_original = 0.0;
  for (int rep = 0; rep < total; ++rep) {
    const PcReport rep_i = pc_counterexample(8, 1, 0.0, rng);
    REQUIRE_FALSE(rep_i.degenerate_spectrum);
    max_original = std::max(max_original, rep_i.original_risk);
    if (rep_i.rotated_risk >= 0.1) ++large;
  }
  CHECK(max_original <= 1e-8);
  CHECK(large >= 95);
}

TEST_CASE("pc counterexample agrees with unregularized ridge on clean data") {
  Rng rng(60);
  const PcReport rep = pc_counterexample(8, 1, 0.0, rng);
  // ridge at lambda=0 on sigma=0 data recovers e1 exactly, risk 0
  CHECK(std::abs(rep.original_risk - 0.0) < 1e-8);
}

TEST_CASE("pc counterexample flags an isotropic spectrum") {
  Rng rng(61);
  const PcReport rep = pc_counterexample(8, 1, 0.0, rng, /*p1_scale=*/1.0);
  CHECK(rep.degenerate_spectrum);
}

TEST_CASE("anisotropic demo: rotation identity and the isotropic segment") {
  AlgorithmConfig gd;
  gd.id = Algorithm::kGd;
  gd.eta = 0.05;

  Rng r1(62);
  Vector scale(2);
  scale << 2.0, 1.0;
  const AnisotropicDemo demo =
      anisotropic_demo(scale, true, {gd}, 400, r1, 0.3, 1);
  CHECK(demo.gd_rotation_identity_dev <= 1e-8);

  // isotropic, noise-free: the gd path is the straight segment 0 -> e1
  Rng r2(63);
  const AnisotropicDemo straight =
      anisotropic_demo(Vector::Ones(2), false, {gd}, 400, r2, 0.0, 1);
  for (const Vector& w : straight.runs[0].trajectory)
    CHECK(std::abs(w[1]) <= 1e-8);  // collinear with e1
  CHECK(straight.runs[0].min_distance <= 1e-3);
}

TEST_CASE("anisotropic demo: multiplicative bias survives rotation") {
  AlgorithmConfig gd;
  gd.id = Algorithm::kGd;
  gd.eta = 0.05;
  // a small beta makes the sparsity bias of the multiplicative update sharp
  AlgorithmConfig aegu;
  aegu.id = Algorithm::kApproxEguPm;
  aegu.eta = 0.025;
  aegu.beta = 1e-4;

  Vector scale(2);
  scale << 2.0, 1.0;
  std::vector<double> gd_min, egu_min;
  for (int rep = 0; rep < 50; ++rep) {
    Rng rng(7000 + rep);
    const AnisotropicDemo demo =
        anisotropic_demo(scale, true, {gd, aegu}, 2000, rng, 0.3, 1);
    gd_min.push_back(demo.runs[0].min_distance);
    egu_min.push_back(demo.runs[1].min_distance);
  }
  std::sort(gd_min.begin(), gd_min.end());
  std::sort(egu_min.begin(), egu_min.end());
  const double med_gd = 0.5 * (gd_min[24] + gd_min[25]);
  const double med_egu = 0.5 * (egu_min[24] + egu_min[25]);
  INFO("median min distance: gd=", med_gd, " egu_pm=", med_egu);
  CHECK(med_egu <= 0.5 * med_gd);
}

TEST_CASE("learner handle validates closed-form hyperparameters") {
  const Dataset ds = make(4, 1, 0.5, 64);
  LearnerHandle ridge;
  ridge.algo.id = Algorithm::kRidge;  // lambda left unset
  CHECK_THROWS_AS(ridge.train(ds.x, ds.y), std::invalid_argument);
}

TEST_CASE("principal-component learner recovers the boosted axis") {
  ProblemConfig cfg;
  cfg.d = 6;
  cfg.m = 2;
  cfg.sigma = 0.0;
  Vector scale = Vector::Ones(6);
  scale[0] = 2.0;
  cfg.column_scale = scale;
  Rng rng(65);
  const Dataset ds = build_dataset(cfg, rng);

  LearnerHandle pc;
  pc.algo.id = Algorithm::kPcWeight;
  const Vector w = pc.train(ds.x, ds.y);
  CHECK(excess_risk(w, ds.target) <= 1e-8);

  // isotropic gram has no leading direction
  const Dataset flat = make(6, 2, 0.0, 66);
  CHECK_THROWS_AS((void)pc.train(flat.x, flat.y), std::domain_error);
}
