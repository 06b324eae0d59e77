#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ltecir/common.hpp"
#include "ltecir/phy/grid.hpp"

namespace ltecir::phy {

// One frame of time-domain samples: per symbol, map used rows onto FFT bins,
// inverse FFT (scaled 1/N), prepend cyclic prefix.
std::vector<cplx> ofdm_modulate(const ResourceGrid& grid, const GridConfig& cfg);

// Inverse: strip CP, forward FFT (unscaled), extract used rows.  `samples`
// must cover one full frame starting at frame_start.
ResourceGrid ofdm_demodulate(std::span<const cplx> samples, size_t frame_start,
                             const GridConfig& cfg);

// Complete downlink frame `frame_index`: PSS/SSS in slots 0 and 10, CRS on
// port 0 (symbols 0 and 4 of every slot), remaining REs filled with seeded
// pseudo-random QPSK payload.
ResourceGrid make_downlink_frame(const GridConfig& cfg, uint64_t frame_index,
                                 uint64_t payload_seed);

}  // namespace ltecir::phy
