#pragma once

#include <functional>
#include <vector>

#include "rotlab/linalg.hpp"

namespace rotlab {

/// Right-hand side of an autonomous ODE, state -> derivative.
using OdeRhs = std::function<Vector(const Vector&)>;

/// Preconditioned gradient flow  w' = -P(w) * 2(w - w_ls)  with diagonal P.
struct OdeSpec {
  Vector w_ls;
  std::function<Vector(const Vector&)> precond_diag;  // diag of P(w)

  [[nodiscard]] int dimension() const { return static_cast<int>(w_ls.size()); }
  [[nodiscard]] OdeRhs rhs() const {
    return [ls = w_ls, p = precond_diag](const Vector& w) -> Vector {
      return -p(w).cwiseProduct(2.0 * (w - ls));
    };
  }
};

struct OdeSample {
  double t;
  Vector w;
};

/// Classic fixed-step RK4 on [0, t_end] with `steps` uniform steps, sampling
/// every step boundary (t=0 included). t_end == 0 yields the single sample
/// (0, w0). A non-finite derivative or state raises std::runtime_error
/// naming the offending time.
std::vector<OdeSample> rk4_integrate(const OdeRhs& f, const Vector& w0,
                                     double t_end, int steps);

std::vector<OdeSample> rk4_integrate(const OdeSpec& spec, const Vector& w0,
                                     double t_end, int steps);

}  // namespace rotlab
