#include "rotlab/flows.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rotlab/lambert.hpp"
#include "rotlab/ode.hpp"

namespace rotlab {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void coordinate_error(const char* what, int i) {
  throw std::domain_error(std::string(what) + " (coordinate " +
                          std::to_string(i) + ")");
}

// W(exp(la)) without forming exp(la); needed when Burg offsets put the
// Lambert argument far above the overflow threshold.
double lambert_w0_of_exp(double la) {
  if (la < 700.0) return lambert_w0(std::exp(la));
  double w = la - std::log(la);
  for (int it = 0; it < 64; ++it) {
    const double f = w + std::log(w) - la;
    const double step = f / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) < 1e-14 * w) break;
  }
  return w;
}

}  // namespace

FlowParams make_flow_params(FlowAlgorithm id, const Vector& w_ls,
                            const Vector& w0, double beta, double eps) {
  if (w_ls.size() != w0.size())
    throw std::invalid_argument("make_flow_params: dimension mismatch");
  const int d = static_cast<int>(w_ls.size());
  FlowParams p;
  p.id = id;
  p.w_ls = w_ls;
  p.w0 = w0;
  p.degenerate.assign(d, false);
  p.beta = beta;
  p.eps = eps;

  switch (id) {
    case FlowAlgorithm::kGd:
    case FlowAlgorithm::kPrimed:
      break;

    case FlowAlgorithm::kEgu: {
      p.c = Vector::Zero(d);
      for (int i = 0; i < d; ++i) {
        if (w_ls[i] == 0.0) {
          // w' = -2 w^2 has the rational solution w0/(1 + 2 w0 t).
          p.degenerate[i] = true;
          continue;
        }
        const double ratio = w0[i] / w_ls[i];
        if (!(ratio > 0.0 && ratio < 1.0))
          coordinate_error("egu flow: start must lie strictly between 0 and w_ls",
                           i);
        p.c[i] = std::atanh(2.0 * ratio - 1.0);
      }
      break;
    }

    case FlowAlgorithm::kEguPm: {
      p.tau0 = Vector::Zero(d);
      p.rate = Vector::Zero(d);
      for (int i = 0; i < d; ++i) {
        if (w0[i] == w_ls[i]) {
          p.degenerate[i] = true;
          continue;
        }
        const double s = w0[i] > w_ls[i] ? 1.0 : -1.0;
        p.tau0[i] = std::asinh((1.0 + w_ls[i] * w0[i]) / (w0[i] - w_ls[i]));
        p.rate[i] = 2.0 * s * std::sqrt(w_ls[i] * w_ls[i] + 1.0);
      }
      break;
    }

    case FlowAlgorithm::kAdagrad: {
      if (beta <= 0.0 || eps <= 0.0)
        throw std::invalid_argument("adagrad flow: beta and eps must be > 0");
      p.k = Vector::Zero(d);
      p.ell = Vector::Zero(d);
      const double sqrt_eps = std::sqrt(eps);
      for (int i = 0; i < d; ++i) {
        const double delta = w_ls[i] - w0[i];
        if (delta == 0.0) {
          p.degenerate[i] = true;
          continue;
        }
        const double k = 8.0 / (beta * delta * delta + 2.0 * sqrt_eps);
        p.k[i] = k;
        p.ell[i] = 1.0 / k - std::log1p(-k * sqrt_eps / 4.0) / k - sqrt_eps / 4.0;
      }
      break;
    }

    case FlowAlgorithm::kBurg: {
      p.b = Vector::Constant(d, kNan);
      p.burg_y = Vector::Zero(d);
      for (int i = 0; i < d; ++i) {
        if (!(w_ls[i] > 0.0) || !(w0[i] > 0.0))
          coordinate_error("burg flow: w_ls and w0 must be strictly positive", i);
        const double y = w_ls[i] / w0[i] - 1.0;
        p.burg_y[i] = y;
        if (y == 0.0) p.degenerate[i] = true;
        if (y > 0.0)
          p.b[i] = (std::log(y) + y) / (2.0 * w_ls[i] * w_ls[i]);
      }
      break;
    }
  }
  return p;
}

Vector gd_flow_at(const Vector& w_ls, const Vector& w0, double t) {
  return w_ls + (w0 - w_ls) * std::exp(-2.0 * t);
}

Vector primed_flow_at(const Vector& w_ls, const Vector& w0, double t) {
  Vector out(w_ls.size());
  for (int i = 0; i < w_ls.size(); ++i)
    out[i] =
        w_ls[i] + (w0[i] - w_ls[i]) * std::exp(-2.0 * t * w_ls[i] * w_ls[i]);
  return out;
}

Vector egu_flow_at(const FlowParams& p, double t) {
  Vector out(p.w_ls.size());
  for (int i = 0; i < out.size(); ++i) {
    if (p.degenerate[i]) {
      out[i] = p.w0[i] / (1.0 + 2.0 * p.w0[i] * t);
    } else {
      out[i] = 0.5 * p.w_ls[i] * (1.0 + std::tanh(p.w_ls[i] * t + p.c[i]));
    }
  }
  return out;
}

Vector egu_pm_flow_at(const FlowParams& p, double t) {
  Vector out(p.w_ls.size());
  for (int i = 0; i < out.size(); ++i) {
    if (p.degenerate[i]) {
      out[i] = p.w0[i];
      continue;
    }
    const double tau = p.tau0[i] + t * p.rate[i];
    const double sh = std::sinh(tau);  // +-inf at large tau is fine below
    const double denom = sh - p.w_ls[i];
    const double s = p.rate[i] > 0.0 ? 1.0 : -1.0;
    if (denom * s <= 0.0)
      throw std::runtime_error(
          "egu_pm flow: pole crossing at t = " + std::to_string(t) +
          " (coordinate " + std::to_string(i) + ")");
    out[i] = p.w_ls[i] + (1.0 + p.w_ls[i] * p.w_ls[i]) / denom;
  }
  return out;
}

Vector adagrad_flow_at(const FlowParams& p, double t) {
  Vector out(p.w_ls.size());
  for (int i = 0; i < out.size(); ++i) {
    if (p.degenerate[i]) {
      out[i] = p.w0[i];
      continue;
    }
    double arg = -std::exp(-p.k[i] * (t + p.ell[i]));
    static const double kInvE = std::exp(-1.0);
    if (arg < -kInvE) {
      if (arg < -kInvE - 1e-12)
        throw std::runtime_error(
            "adagrad flow: Lambert argument below -1/e at coordinate " +
            std::to_string(i));
      arg = -kInvE;
    }
    const double w = lambert_w0(arg);
    const double sign = p.w_ls[i] > p.w0[i] ? 1.0 : -1.0;
    out[i] = p.w_ls[i] - sign * std::sqrt(-8.0 / (p.beta * p.k[i]) * w);
  }
  return out;
}

Vector burg_flow_at(const Vector& w_ls, const Vector& w0, double t) {
  const FlowParams p = make_flow_params(FlowAlgorithm::kBurg, w_ls, w0);
  Vector out(w_ls.size());
  for (int i = 0; i < out.size(); ++i) {
    if (p.degenerate[i]) {
      out[i] = w0[i];
      continue;
    }
    const double y = p.burg_y[i];
    const double decay = 2.0 * w_ls[i] * w_ls[i] * t;
    double w;
    if (y > 0.0) {
      // argument y e^y e^{-decay}, evaluated in log space
      w = lambert_w0_of_exp(std::log(y) + y - decay);
    } else {
      // -1 < y < 0: the argument stays inside (-1/e, 0)
      w = lambert_w0(y * std::exp(y - decay));
    }
    out[i] = w_ls[i] / (w + 1.0);
  }
  return out;
}

Vector flow_at(const FlowParams& p, double t) {
  switch (p.id) {
    case FlowAlgorithm::kGd: return gd_flow_at(p.w_ls, p.w0, t);
    case FlowAlgorithm::kPrimed: return primed_flow_at(p.w_ls, p.w0, t);
    case FlowAlgorithm::kEgu: return egu_flow_at(p, t);
    case FlowAlgorithm::kEguPm: return egu_pm_flow_at(p, t);
    case FlowAlgorithm::kAdagrad: return adagrad_flow_at(p, t);
    case FlowAlgorithm::kBurg: return burg_flow_at(p.w_ls, p.w0, t);
  }
  throw std::logic_error("flow_at: unknown algorithm");
}

PreconditionerSpec egu_preconditioner_spec() {
  PreconditionerSpec s;
  s.precond_diag = [](const Vector& w) -> Vector { return w; };
  s.mirror_map = [](const Vector& w) -> Vector {
    return w.array().log().matrix();
  };
  s.reparam = [](const Vector& w) -> Vector {
    return 2.0 * w.array().sqrt().matrix();
  };
  s.metric_diag = [](const Vector& w) -> Vector { return w.cwiseInverse(); };
  return s;
}

EquivalenceReport check_equivalences(const PreconditionerSpec& spec,
                                     const std::vector<Vector>& points,
                                     const Vector& flow_w_ls,
                                     const Vector& flow_w0, double t_max) {
  const double h = 1e-6;
  EquivalenceReport rep;
  for (const Vector& w : points) {
    if ((w.array() <= 0.0).any())
      throw std::domain_error("check_equivalences: sample points must be positive");
    const Vector p = spec.precond_diag(w);
    for (int i = 0; i < w.size(); ++i) {
      Vector wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      // coordinatewise maps: only coordinate i of the image moves
      const double df = (spec.mirror_map(wp)[i] - spec.mirror_map(wm)[i]) / (2 * h);
      const double dg = (spec.reparam(wp)[i] - spec.reparam(wm)[i]) / (2 * h);
      const double gamma = spec.metric_diag(w)[i];
      rep.max_mirror_mismatch =
          std::max(rep.max_mirror_mismatch, std::abs(1.0 / df - p[i]));
      rep.max_reparam_mismatch =
          std::max(rep.max_reparam_mismatch, std::abs(1.0 / (dg * dg) - p[i]));
      rep.max_metric_mismatch =
          std::max(rep.max_metric_mismatch, std::abs(1.0 / gamma - p[i]));
    }
  }
  rep.max_jacobian_mismatch =
      std::max({rep.max_mirror_mismatch, rep.max_reparam_mismatch,
                rep.max_metric_mismatch});

  // Gradient flow in the shared-weight product variable s = g(w) = 2 sqrt(w)
  // (equal two-layer factors u = v = s/2): s' = -s (w - w_ls), w = (s/2)^2.
  // This must retrace the EGU closed form exactly.
  if (flow_w_ls.size() > 0) {
    const FlowParams egu =
        make_flow_params(FlowAlgorithm::kEgu, flow_w_ls, flow_w0);
    const OdeRhs rhs = [&](const Vector& s) -> Vector {
      const Vector w = (s.array() / 2.0).square().matrix();
      return -s.cwiseProduct(w - flow_w_ls);
    };
    const Vector s0 = 2.0 * flow_w0.array().sqrt().matrix();
    const int steps = 40000;
    const auto path = rk4_integrate(rhs, s0, t_max, steps);
    const int stride = steps / 40;
    for (std::size_t idx = 0; idx < path.size(); idx += stride) {
      const Vector w_num = (path[idx].w.array() / 2.0).square().matrix();
      const Vector w_cf = egu_flow_at(egu, path[idx].t);
      rep.flow_deviation =
          std::max(rep.flow_deviation, max_abs(Vector(w_num - w_cf)));
    }
  }
  return rep;
}

std::vector<MetricGridEntry> metric_grid(MetricKind kind,
                                         std::array<double, 2> lo,
                                         std::array<double, 2> hi,
                                         int resolution) {
  if (resolution < 2)
    throw std::invalid_argument("metric_grid: resolution must be >= 2");
  if (lo[0] >= hi[0] || lo[1] >= hi[1])
    throw std::invalid_argument("metric_grid: box must be non-degenerate");
  if (kind == MetricKind::kEgu && (lo[0] <= 0.0 || lo[1] <= 0.0))
    throw std::domain_error("metric_grid: EGU metric needs a positive box");

  std::vector<MetricGridEntry> out;
  out.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    const double w1 = lo[0] + (hi[0] - lo[0]) * i / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double w2 = lo[1] + (hi[1] - lo[1]) * j / (resolution - 1);
      MetricGridEntry e{w1, w2, 1.0, 1.0};
      if (kind == MetricKind::kEgu) {
        e.g11 = 1.0 / w1;
        e.g22 = 1.0 / w2;
      }
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace rotlab
