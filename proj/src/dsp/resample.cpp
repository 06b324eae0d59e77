#include "ltecir/dsp/resample.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ltecir/dsp/filter.hpp"

namespace ltecir::dsp {

Rational approximate_ratio(double x, int64_t max_den, double tol) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::invalid_argument("approximate_ratio: ratio must be finite and positive");
  // Continued-fraction convergents p/q; stop when q would exceed max_den.
  int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fa = std::floor(v);
    const int64_t a = static_cast<int64_t>(fa);
    const int64_t p2 = a * p1 + p0;
    const int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double rem = v - fa;
    if (rem < 1e-15) break;
    v = 1.0 / rem;
  }
  if (q1 == 0 || std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) > tol * x)
    throw std::invalid_argument("approximate_ratio: no rational approximation with den <= " +
                                std::to_string(max_den));
  const int64_t g = std::gcd(p1, q1);
  return {p1 / g, q1 / g};
}

Resampler::Resampler(double from_hz, double to_hz, size_t taps_per_phase)
    : taps_per_phase_(taps_per_phase) {
  if (!(from_hz > 0.0) || !(to_hz > 0.0))
    throw std::invalid_argument("Resampler: rates must be positive");
  const Rational r = approximate_ratio(to_hz / from_hz);
  up_ = r.num;
  down_ = r.den;
  if (up_ == 1 && down_ == 1) return;

  // Prototype lowpass at pi/max(L, M) (of the upsampled rate), gain L so a
  // tone passes with unit amplitude.
  const size_t n = static_cast<size_t>(up_) * taps_per_phase_;
  const double cutoff = 1.0 / static_cast<double>(std::max(up_, down_));
  const double mid = 0.5 * static_cast<double>(n - 1);
  std::vector<double> proto(n);
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) - mid;
    proto[i] = kaiser_tap(t, mid + 1.0, 8.0) * cutoff * sinc(cutoff * t) *
               static_cast<double>(up_);
  }
  filt_.assign(static_cast<size_t>(up_), std::vector<double>(taps_per_phase_, 0.0));
  for (size_t i = 0; i < n; ++i) filt_[i % up_][i / up_] = proto[i];
}

std::vector<cplx> Resampler::process(std::span<const cplx> x) const {
  if (up_ == 1 && down_ == 1) return {x.begin(), x.end()};

  const int64_t n_in = static_cast<int64_t>(x.size());
  const int64_t n_out = (n_in * up_) / down_;
  std::vector<cplx> y(static_cast<size_t>(n_out));
  // Output m taps the virtual upsampled stream at index m*down_; delay by half
  // the prototype so the filter is (approximately) centered.
  const int64_t center = (static_cast<int64_t>(up_) * static_cast<int64_t>(taps_per_phase_)) / 2;
  for (int64_t m = 0; m < n_out; ++m) {
    const int64_t pos = m * down_ + center;
    const size_t phase = static_cast<size_t>(pos % up_);
    const int64_t base = pos / up_;
    const auto& h = filt_[phase];
    cplx acc = 0.0;
    for (size_t k = 0; k < taps_per_phase_; ++k) {
      const int64_t idx = base - static_cast<int64_t>(k);
      if (idx < 0 || idx >= n_in) continue;
      acc += h[k] * x[static_cast<size_t>(idx)];
    }
    y[static_cast<size_t>(m)] = acc;
  }
  return y;
}

}  // namespace ltecir::dsp
