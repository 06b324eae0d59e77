#pragma once

#include <span>

#include "ltecir/phy/grid.hpp"
#include "ltecir/rx/types.hpp"

namespace ltecir::rx {

// Least-squares CFR on the CRS comb of one CRS-bearing symbol: received RE
// divided by the known CRS value.  `row` is the demodulated used-subcarrier
// row for frame-global symbol `symbol_index`.
CfrEstimate estimate_cfr(std::span<const cplx> row, const phy::GridConfig& cfg,
                         int symbol_index);

// f_D = angle(sum_k b[k] conj(a[k])) / (2 pi dt); unambiguous for |f_D| <
// 1/(2 dt).
double coarse_doppler(const CfrEstimate& a, const CfrEstimate& b, double dt_s);

}  // namespace ltecir::rx
