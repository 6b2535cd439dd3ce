#include "rotlab/ode.hpp"

#include <stdexcept>
#include <string>

namespace rotlab {

std::vector<OdeSample> rk4_integrate(const OdeRhs& f, const Vector& w0,
                                     double t_end, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4_integrate: steps must be >= 1");
  if (t_end < 0.0) throw std::invalid_argument("rk4_integrate: t_end must be >= 0");
  if (t_end == 0.0) return {{0.0, w0}};

  const double h = t_end / steps;
  std::vector<OdeSample> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back({0.0, w0});

  Vector w = w0;
  for (int k = 0; k < steps; ++k) {
    const double t = h * k;
    const Vector k1 = f(w);
    const Vector k2 = f(w + 0.5 * h * k1);
    const Vector k3 = f(w + 0.5 * h * k2);
    const Vector k4 = f(w + h * k3);
    w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!all_finite(w)) {
      throw std::runtime_error("rk4_integrate: diverged at t = " +
                               std::to_string(t + h));
    }
    out.push_back({h * (k + 1), w});
  }
  return out;
}

std::vector<OdeSample> rk4_integrate(const OdeSpec& spec, const Vector& w0,
                                     double t_end, int steps) {
  if (w0.size() != spec.dimension())
    throw std::invalid_argument("rk4_integrate: dimension mismatch");
  return rk4_integrate(spec.rhs(), w0, t_end, steps);
}

}  // namespace rotlab
