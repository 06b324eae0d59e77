#pragma once

#include <span>
#include <vector>

#include "ltecir/common.hpp"

namespace ltecir::dsp {

double bessel_i0(double x);

// Kaiser window sample at continuous offset x from the window center,
// half-width h (returns 0 outside |x| > h).
double kaiser_tap(double x, double half_width, double beta);

std::vector<double> kaiser_window(size_t n, double beta);

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

// Kaiser-windowed sinc kernel for a fractional delay mu in [0, 1).
// The kernel has ntaps coefficients and a group delay of ntaps/2 - 1 + mu
// samples; for mu == 0 it is an exact unit impulse.
std::vector<double> fractional_delay_kernel(double mu, size_t ntaps, double beta = 8.0);

}  // namespace ltecir::dsp
