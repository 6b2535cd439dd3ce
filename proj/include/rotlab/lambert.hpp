#pragma once

namespace rotlab {

/// Principal branch of Lambert's W: the w >= -1 solving w*e^w = x, defined
/// for x >= -1/e. Branch-point series start near x = -1/e, logarithmic or
/// rational start elsewhere, then Halley polish to relative residual 1e-12
/// (at most 40 iterations; failure to converge throws std::runtime_error).
/// x below -1/e throws std::domain_error.
double lambert_w0(double x);

}  // namespace rotlab
