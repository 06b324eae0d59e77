#pragma once

#include <vector>

#include "ltecir/rx/types.hpp"

namespace ltecir::rx {

// Inverse FFT of the comb CFR, aligned so the tap at `rel_delay_s` (for
// Align::kToa) or the strongest tap (Align::kPeak) sits at index 0, then
// magnitude, truncated or zero-padded to n_cir.  rel_delay_s is the delay as
// seen by this CFR (relative to the demodulation window).
std::vector<double> extract_cir(const CfrEstimate& cfr, int n_cir, double rel_delay_s,
                                Align align);

}  // namespace ltecir::rx
