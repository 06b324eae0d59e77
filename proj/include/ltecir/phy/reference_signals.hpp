#pragma once

#include <array>
#include <vector>

#include "ltecir/common.hpp"
#include "ltecir/phy/grid.hpp"

namespace ltecir::phy {

// 62-point Zadoff-Chu PSS for N_ID^(2) = nid2 (roots 25 / 29 / 34).
std::vector<cplx> generate_pss(int nid2);

// 62-point SSS for (nid1, nid2); subframe5 selects the second half-frame
// variant (m0/m1 swapped with the z-scrambling of the other index).
std::vector<cplx> generate_sss(int nid1, int nid2, bool subframe5);

// CRS QPSK sequence for antenna port 0, OFDM symbol l (0 or 4) of slot ns.
// Returns used_subcarriers/6 values; positions(cfg, l) gives the matching
// used-subcarrier rows (every 6th, cell-dependent shift).
std::vector<cplx> generate_crs(const GridConfig& cfg, int ns, int l);
std::vector<int> crs_positions(const GridConfig& cfg, int l);
bool is_crs_symbol(int l_in_slot);  // l == 0 || l == 4

struct ReferenceSignals {
  std::vector<cplx> pss;        // 62
  std::vector<cplx> sss_sf0;    // 62, subframe 0
  std::vector<cplx> sss_sf5;    // 62, subframe 5
};

ReferenceSignals generate_reference_signals(const GridConfig& cfg);

// Used-subcarrier rows occupied by PSS/SSS (the central 62 rows).
std::vector<int> sync_positions(const GridConfig& cfg);

// Length-31 Gold sequence c(n), n = 0..len-1, per the LTE pseudo-random
// generator (Nc = 1600 discard).
std::vector<int> gold_sequence(uint32_t c_init, int len);

}  // namespace ltecir::phy
