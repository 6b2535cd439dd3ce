#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rotlab/flows.hpp"
#include "rotlab/optimizers.hpp"
#include "rotlab/rng.hpp"
#include "rotlab/verification.hpp"

using namespace rotlab;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

// Random instance inside the domain of the family.
struct Instance {
  Vector w_ls, w0;
  double beta = 1.0, eps = 0.5;
};

Instance random_instance(FlowAlgorithm id, Rng& rng) {
  Instance inst;
  double w_ls = 0.25 + 1.75 * rng.next_double();
  double w0;
  switch (id) {
    case FlowAlgorithm::kEgu:
      w0 = w_ls * (0.05 + 0.9 * rng.next_double());
      break;
    case FlowAlgorithm::kBurg:
      w0 = w_ls * (0.1 + 1.8 * rng.next_double());
      break;
    default:
      if (rng.next_double() < 0.5) w_ls = -w_ls;
      w0 = -1.0 + 2.0 * rng.next_double();
      break;
  }
  inst.w_ls = scalar(w_ls);
  inst.w0 = scalar(w0);
  inst.beta = 0.5 + 1.5 * rng.next_double();
  inst.eps = 0.05 + 0.95 * rng.next_double();
  return inst;
}

const FlowAlgorithm kAllFlows[] = {FlowAlgorithm::kGd,     FlowAlgorithm::kEgu,
                                   FlowAlgorithm::kEguPm,  FlowAlgorithm::kPrimed,
                                   FlowAlgorithm::kAdagrad, FlowAlgorithm::kBurg};

}  // namespace

TEST_CASE("flows start at w0 and end at w_ls") {
  Rng rng(40);
  for (FlowAlgorithm id : kAllFlows) {
    for (int rep = 0; rep < 20; ++rep) {
      const Instance inst = random_instance(id, rng);
      const FlowParams p =
          make_flow_params(id, inst.w_ls, inst.w0, inst.beta, inst.eps);
      const double start_tol = id == FlowAlgorithm::kAdagrad ? 1e-8 : 1e-9;
      CHECK(max_abs(Vector(flow_at(p, 0.0) - inst.w0)) < start_tol);
      const double end_tol = id == FlowAlgorithm::kAdagrad ? 1e-3 : 1e-6;
      CHECK(max_abs(Vector(flow_at(p, 1000.0) - inst.w_ls)) < end_tol);
    }
  }
}

TEST_CASE("flows satisfy their differential equations (finite differences)") {
  Rng rng(41);
  const double h = 1e-6;
  for (FlowAlgorithm id : kAllFlows) {
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
      const Instance inst = random_instance(id, rng);
      const FlowParams p =
          make_flow_params(id, inst.w_ls, inst.w0, inst.beta, inst.eps);
      const double t = 0.05 + 3.0 * rng.next_double();
      const Vector dw =
          (flow_at(p, t + h) - flow_at(p, t - h)) / (2.0 * h);
      const Vector w = flow_at(p, t);

      Vector rhs(1);
      const double ls = inst.w_ls[0];
      switch (id) {
        case FlowAlgorithm::kGd: rhs[0] = -2.0 * (w[0] - ls); break;
        case FlowAlgorithm::kEgu: rhs[0] = -2.0 * w[0] * (w[0] - ls); break;
        case FlowAlgorithm::kEguPm:
          rhs[0] = -2.0 * std::sqrt(w[0] * w[0] + 1.0) * (w[0] - ls);
          break;
        case FlowAlgorithm::kPrimed: rhs[0] = -2.0 * ls * ls * (w[0] - ls); break;
        case FlowAlgorithm::kBurg:
          rhs[0] = -2.0 * w[0] * w[0] * (w[0] - ls);
          break;
        case FlowAlgorithm::kAdagrad: {
          // G(t) = eps + int_0^t 4 beta (w(s) - ls)^2 ds by Simpson
          // quadrature over the w-trajectory; independent of the G closed
          // form.
          const int n = 2000;
          double integral = 0.0;
          for (int k = 0; k <= n; ++k) {
            const double s = t * k / n;
            const double delta = flow_at(p, s)[0] - ls;
            const double f = 4.0 * inst.beta * delta * delta;
            const double wgt = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
            integral += wgt * f;
          }
          integral *= t / (3.0 * n);
          rhs[0] = -2.0 * (w[0] - ls) / std::sqrt(inst.eps + integral);
          break;
        }
      }
      const double rel =
          max_abs(Vector(dw - rhs)) / std::max(1.0, max_abs(rhs));
      worst = std::max(worst, rel);
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("egu flow: fixed values and the degenerate rational branch") {
  const FlowParams p =
      make_flow_params(FlowAlgorithm::kEgu, scalar(1.0), scalar(0.5));
  CHECK(p.c[0] == doctest::Approx(0.0));  // w0 = w_ls/2 gives c = 0
  CHECK(flow_at(p, 1.0)[0] ==
        doctest::Approx(0.5 * (1.0 + std::tanh(1.0))).epsilon(1e-12));
  CHECK(std::abs(flow_at(p, 1000.0)[0] - 1.0) < 1e-9);

  // w_ls = 0 coordinate follows w0/(1 + 2 w0 t)
  Vector w_ls(2), w0(2);
  w_ls << 1.0, 0.0;
  w0 << 0.5, 0.7;
  const FlowParams pd = make_flow_params(FlowAlgorithm::kEgu, w_ls, w0);
  CHECK(flow_at(pd, 2.0)[1] == doctest::Approx(0.7 / (1.0 + 2.8)).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(
      make_flow_params(FlowAlgorithm::kEgu, scalar(1.0), scalar(1.5)),
      doctest::Contains("coordinate"), std::domain_error);
  CHECK_THROWS_AS(make_flow_params(FlowAlgorithm::kEgu, scalar(1.0), scalar(0.0)),
                  std::domain_error);
}

TEST_CASE("egu_pm flow: spec instance vs RK4 and sinh saturation") {
  const double dev = flow_vs_rk4_deviation(FlowAlgorithm::kEguPm, scalar(1.0),
                                           scalar(0.0), 1.0, 1.0, {0.5});
  CHECK(dev < 1e-6);

  const FlowParams p =
      make_flow_params(FlowAlgorithm::kEguPm, scalar(1.0), scalar(0.0));
  CHECK(flow_at(p, 0.0)[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(flow_at(p, 500.0)[0] - 1.0) < 1e-12);  // sinh overflow safe

  // degenerate coordinate stays constant
  const FlowParams pc =
      make_flow_params(FlowAlgorithm::kEguPm, scalar(0.3), scalar(0.3));
  CHECK(flow_at(pc, 7.0)[0] == 0.3);
}

TEST_CASE("primed flow: zero-signal coordinates freeze") {
  Vector w_ls(2), w0(2);
  w_ls << 1.0, 0.0;
  w0 << 0.0, 0.4;
  CHECK(primed_flow_at(w_ls, w0, 0.0) == w0);
  const Vector at = primed_flow_at(w_ls, w0, 0.5);
  CHECK(at[0] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(at[1] == 0.4);  // zero exponent
}

TEST_CASE("adagrad flow: stiff accumulator start vs graded RK4") {
  const double dev = flow_vs_rk4_deviation(FlowAlgorithm::kAdagrad, scalar(1.0),
                                           scalar(0.0), 1.0, 1e-8, {1.0});
  CHECK(dev < 1e-5);
}

TEST_CASE("burg flow: both monotone branches and domain validation") {
  CHECK(burg_flow_at(scalar(1.0), scalar(0.1), 0.0)[0] ==
        doctest::Approx(0.1).epsilon(1e-9));
  CHECK(std::abs(burg_flow_at(scalar(1.0), scalar(0.1), 1000.0)[0] - 1.0) <
        1e-6);

  const double dev_lo = flow_vs_rk4_deviation(
      FlowAlgorithm::kBurg, scalar(1.0), scalar(0.1), 1.0, 1.0, {2.0});
  CHECK(dev_lo < 1e-6);
  const double dev_hi = flow_vs_rk4_deviation(
      FlowAlgorithm::kBurg, scalar(1.0), scalar(2.5), 1.0, 1.0, {2.0});
  CHECK(dev_hi < 1e-6);

  CHECK_THROWS_AS(burg_flow_at(scalar(1.0), scalar(-0.1), 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(burg_flow_at(scalar(-1.0), scalar(0.1), 1.0),
                  std::domain_error);
}

TEST_CASE("gd flow: exponential relaxation and linearity") {
  Vector w_ls(2), w0(2);
  w_ls << 1.0, -0.5;
  w0 << 0.0, 0.25;
  CHECK(gd_flow_at(w_ls, w0, 0.0) == w0);
  const Vector at = gd_flow_at(w_ls, w0, 0.5);
  CHECK(at[0] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("all closed forms match converged RK4 (acceptance-grade sweep)") {
  for (const CheckResult& c : verify_flows(1234)) {
    INFO(c.name, " value=", c.value, " tol=", c.tol);
    CHECK(c.pass);
  }
}

TEST_CASE("preconditioner equivalences: identity point and random points") {
  const PreconditionerSpec spec = egu_preconditioner_spec();
  std::vector<Vector> identity_pt = {Vector::Ones(2)};
  Vector w_ls(2), w0(2);
  w_ls << 1.0, 0.5;
  w0 << 0.25, 0.125;
  const EquivalenceReport at_one =
      check_equivalences(spec, identity_pt, w_ls, w0, 3.0);
  CHECK(at_one.max_jacobian_mismatch < 1e-8);
  CHECK(at_one.flow_deviation < 1e-8);

  for (const CheckResult& c : verify_equivalence(99)) {
    INFO(c.name, " value=", c.value, " tol=", c.tol);
    CHECK(c.pass);
  }

  std::vector<Vector> bad = {Vector::Zero(2)};
  CHECK_THROWS_AS(check_equivalences(spec, bad, w_ls, w0, 1.0),
                  std::domain_error);
}

TEST_CASE("euler iterates of approximated EGU+- with beta=1/2 track the flow") {
  Vector w_ls(2), w0(2);
  w_ls << 1.0, -0.4;
  w0 << 0.0, 0.0;
  const FlowParams flow = make_flow_params(FlowAlgorithm::kEguPm, w_ls, w0);
  const LeastSquares ls{w_ls, w_ls - Vector::Unit(2, 0)};
  const double t_end = 1.5;
  double prev_err = -1.0;
  for (double eta : {1e-2, 5e-3, 2.5e-3}) {
    ApproxEguState s{w0, 0.5, eta};  // sqrt(w^2 + 4 beta^2) = sqrt(w^2 + 1)
    const int steps = static_cast<int>(std::lround(t_end / eta));
    for (int t = 0; t < steps; ++t) s = approx_egu_pm_step(s, ls);
    const double err = max_abs(Vector(s.w - flow_at(flow, t_end)));
    if (prev_err >= 0.0) CHECK(err < 0.75 * prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-3);
}

TEST_CASE("metric grid: reciprocal entries and validation") {
  const auto egu = metric_grid(MetricKind::kEgu, {0.5, 0.5}, {2.0, 2.0}, 2);
  REQUIRE(egu.size() == 4);
  for (const MetricGridEntry& e : egu) {
    CHECK(e.g11 == doctest::Approx(1.0 / e.w1));
    CHECK(e.g22 == doctest::Approx(1.0 / e.w2));
  }
  // spot values: at (1,1) the metric is the identity; at (0.5, 2) it is
  // diag(2, 0.5)
  const auto grid3 = metric_grid(MetricKind::kEgu, {0.5, 0.5}, {2.0, 2.0}, 4);
  CHECK(grid3.size() == 16);

  const auto euclid =
      metric_grid(MetricKind::kEuclidean, {-1.0, -1.0}, {1.0, 1.0}, 3);
  for (const MetricGridEntry& e : euclid) {
    CHECK(e.g11 == 1.0);
    CHECK(e.g22 == 1.0);
  }

  CHECK_THROWS_AS(metric_grid(MetricKind::kEgu, {0.0, 0.5}, {2.0, 2.0}, 2),
                  std::domain_error);
  CHECK_THROWS_AS(metric_grid(MetricKind::kEgu, {0.5, 0.5}, {2.0, 2.0}, 1),
                  std::invalid_argument);
}
