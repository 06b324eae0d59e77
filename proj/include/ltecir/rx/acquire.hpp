#pragma once

#include <span>

#include "ltecir/phy/grid.hpp"
#include "ltecir/rx/types.hpp"

namespace ltecir::rx {

// Blind cell search over >= 2 frames: PSS matched filter (3 roots) with
// non-coherent combining across half-frame repetitions, then coherent SSS
// detection (168 groups x 2 half-frame hypotheses) using a PSS-derived
// channel estimate.  Throws on failure (peak ratio below threshold or not
// enough samples).
AcquisitionResult acquire(std::span<const cplx> samples, double bandwidth_mhz,
                          double peak_ratio_threshold = 2.0);

}  // namespace ltecir::rx
