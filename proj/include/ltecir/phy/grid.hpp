#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ltecir/common.hpp"

namespace ltecir::phy {

inline constexpr int kSymbolsPerSlot = 7;  // normal CP
inline constexpr int kSlotsPerFrame = 20;
inline constexpr int kSymbolsPerFrame = kSymbolsPerSlot * kSlotsPerFrame;  // 140
inline constexpr double kSubcarrierSpacingHz = 15000.0;
inline constexpr double kFrameDurationS = 0.010;

struct GridConfig {
  double bandwidth_mhz = 0.0;
  int cell_id = 0;
  int fft_size = 0;
  int used_subcarriers = 0;
  double sampling_rate_hz = 0.0;
  int cp0 = 0;  // CP of symbol 0 in each slot
  int cp = 0;   // CP of symbols 1..6

  int nid2() const { return cell_id % 3; }
  int nid1() const { return cell_id / 3; }
  int crs_shift() const { return cell_id % 6; }

  int slot_samples() const { return cp0 + 6 * cp + kSymbolsPerSlot * fft_size; }
  int frame_samples() const { return kSlotsPerFrame * slot_samples(); }

  // Start offset of OFDM symbol l (0..6) within a slot, and its CP length.
  int symbol_offset(int l) const {
    return l == 0 ? 0 : cp0 + fft_size + (l - 1) * (cp + fft_size);
  }
  int cp_len(int l) const { return l == 0 ? cp0 : cp; }

  double sample_period_s() const { return 1.0 / sampling_rate_hz; }

  // FFT bin for used-subcarrier row u (rows cover a contiguous block centered
  // on DC; frequency offset = u - used/2 subcarriers).
  int bin_for_row(int u) const {
    const int k = u - used_subcarriers / 2;
    return (k + fft_size) % fft_size;
  }
  // Frequency of row u relative to the carrier, in Hz.
  double row_freq_hz(int u) const {
    return (u - used_subcarriers / 2) * kSubcarrierSpacingHz;
  }
};

GridConfig make_grid_config(double bandwidth_mhz, int cell_id);

struct ResourceGrid {
  // symbols[l][u]: OFDM symbol l (0..139) x used-subcarrier row u.
  std::vector<std::vector<cplx>> symbols;

  explicit ResourceGrid(const GridConfig& cfg)
      : symbols(kSymbolsPerFrame,
                std::vector<cplx>(static_cast<size_t>(cfg.used_subcarriers), cplx(0.0))) {}
};

}  // namespace ltecir::phy
