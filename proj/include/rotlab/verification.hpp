#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotlab/flows.hpp"
#include "rotlab/ode.hpp"

namespace rotlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;  // observed worst-case quantity
  double tol = 0.0;
  std::string detail;
};

/// Endpoint of RK4 integration on a geometrically graded mesh: dyadic
/// segments [0, t 2^-L], [t 2^-L, t 2^-(L-1)], ..., each integrated with
/// `steps_per_segment` uniform steps. Resolves the stiff start of the
/// accumulator flows that a single uniform mesh cannot.
Vector rk4_endpoint_graded(const OdeRhs& f, const Vector& w0, double t_end,
                           int levels = 40, int steps_per_segment = 64);

/// Reference solution with steps doubled until two consecutive meshes agree
/// to 1e-9 (max norm).
Vector rk4_endpoint_converged(const OdeRhs& f, const Vector& w0, double t_end);

/// States at the given sorted times (> 0 entries integrated left to right;
/// the first hop from 0 uses the graded mesh). Doubles the per-segment step
/// count until every recorded state is stable to 1e-9.
std::vector<Vector> rk4_at_times_converged(const OdeRhs& f, const Vector& w0,
                                           const std::vector<double>& times);

/// Right-hand side of the flow family; adagrad uses the coupled (w, G)
/// system, so callers extract the leading block.
OdeRhs flow_rhs(FlowAlgorithm id, const Vector& w_ls, double beta = 1.0);

/// Max over the time grid of |closed form - converged RK4|.
double flow_vs_rk4_deviation(FlowAlgorithm id, const Vector& w_ls,
                             const Vector& w0, double beta, double eps,
                             const std::vector<double>& t_values);

// Named property suites behind `verify`; fixed internal sub-seeding makes
// them reproducible for a given seed.
std::vector<CheckResult> verify_flows(std::uint64_t seed);
std::vector<CheckResult> verify_equivalence(std::uint64_t seed);
std::vector<CheckResult> verify_invariance(std::uint64_t seed);
std::vector<CheckResult> verify_bounds();

}  // namespace rotlab
