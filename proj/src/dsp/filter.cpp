#include "ltecir/dsp/filter.hpp"

#include <cmath>

namespace ltecir::dsp {

double bessel_i0(double x) {
  // Power-series: I0(x) = sum_k ((x/2)^k / k!)^2.  Converges quickly for the
  // argument range used by Kaiser windows (|x| < ~30).
  const double half = 0.5 * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half / k) * (half / k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

double kaiser_tap(double x, double half_width, double beta) {
  const double r = x / half_width;
  const double arg = 1.0 - r * r;
  if (arg < 0.0) return 0.0;
  return bessel_i0(beta * std::sqrt(arg)) / bessel_i0(beta);
}

std::vector<double> kaiser_window(size_t n, double beta) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  const double mid = 0.5 * static_cast<double>(n - 1);
  for (size_t i = 0; i < n; ++i)
    w[i] = kaiser_tap(static_cast<double>(i) - mid, mid, beta);
  return w;
}

std::vector<double> fractional_delay_kernel(double mu, size_t ntaps, double beta) {
  // Center the continuous window on the kernel's group delay so the taps stay
  // symmetric around the interpolation point for any mu.
  const double delay = static_cast<double>(ntaps) / 2.0 - 1.0 + mu;
  const double half_width = static_cast<double>(ntaps) / 2.0;
  std::vector<double> h(ntaps);
  for (size_t m = 0; m < ntaps; ++m) {
    const double t = static_cast<double>(m) - delay;
    h[m] = kaiser_tap(t, half_width, beta) * sinc(t);
  }
  return h;
}

}  // namespace ltecir::dsp
