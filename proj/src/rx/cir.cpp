#include "ltecir/rx/cir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltecir/dsp/fft.hpp"

namespace ltecir::rx {

std::vector<double> extract_cir(const CfrEstimate& cfr, int n_cir, double rel_delay_s,
                                Align align) {
  const size_t m = cfr.values.size();
  if (m == 0) throw std::invalid_argument("extract_cir: empty CFR");
  if (n_cir < 1) throw std::invalid_argument("extract_cir: n_cir must be >= 1");

  size_t p = m;
  if (static_cast<size_t>(n_cir) > m) {
    p = 1;
    while (p < static_cast<size_t>(n_cir)) p <<= 1;
  }

  std::vector<cplx> padded(p, cplx(0.0));
  if (align == Align::kToa) {
    // Phase ramp moves the tap at rel_delay_s onto bin 0 (fractional shift).
    for (size_t i = 0; i < m; ++i)
      padded[i] = cfr.values[i] *
                  std::exp(cplx(0.0, kTwoPi * cfr.comb_spacing_hz * static_cast<double>(i) *
                                         rel_delay_s));
  } else {
    std::copy(cfr.values.begin(), cfr.values.end(), padded.begin());
  }

  auto cir = dsp::ifft_scaled(padded);
  if (align == Align::kPeak) {
    size_t peak = 0;
    double best = -1.0;
    for (size_t i = 0; i < cir.size(); ++i)
      if (std::abs(cir[i]) > best) best = std::abs(cir[i]), peak = i;
    std::rotate(cir.begin(), cir.begin() + static_cast<long>(peak), cir.end());
  }

  std::vector<double> mags(static_cast<size_t>(n_cir), 0.0);
  const size_t keep = std::min(cir.size(), static_cast<size_t>(n_cir));
  for (size_t i = 0; i < keep; ++i) mags[i] = std::abs(cir[i]);
  return mags;
}

}  // namespace ltecir::rx
