#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ltecir/common.hpp"

namespace ltecir::dsp {

struct Rational {
  int64_t num = 1;
  int64_t den = 1;
};

// Best rational approximation of `x` with denominator <= max_den (continued
// fractions).  Throws std::invalid_argument if no approximation within
// `tol` relative error exists -- resampling ratios are expected to be exact
// small rationals for the sampling rates used here.
Rational approximate_ratio(double x, int64_t max_den = 1024, double tol = 1e-9);

// Polyphase rational resampler (windowed-sinc prototype, Kaiser beta 8).
// Converts from `from_hz` to `to_hz`; identity passthrough when equal.
class Resampler {
 public:
  Resampler(double from_hz, double to_hz, size_t taps_per_phase = 32);

  std::vector<cplx> process(std::span<const cplx> x) const;

  int64_t up() const { return up_; }
  int64_t down() const { return down_; }

 private:
  int64_t up_ = 1;
  int64_t down_ = 1;
  size_t taps_per_phase_ = 32;
  // filt_[p][k]: tap k of phase p; prototype length up_ * taps_per_phase_.
  std::vector<std::vector<double>> filt_;
};

}  // namespace ltecir::dsp
