#include "ltecir/phy/ofdm.hpp"

#include <cmath>
#include <stdexcept>

#include "ltecir/dsp/fft.hpp"
#include "ltecir/phy/reference_signals.hpp"
#include "ltecir/rng.hpp"

namespace ltecir::phy {

std::vector<cplx> ofdm_modulate(const ResourceGrid& grid, const GridConfig& cfg) {
  if (grid.symbols.size() != kSymbolsPerFrame ||
      grid.symbols[0].size() != static_cast<size_t>(cfg.used_subcarriers))
    throw std::invalid_argument("ofdm_modulate: grid dimensions do not match config");

  std::vector<cplx> out(static_cast<size_t>(cfg.frame_samples()));
  std::vector<cplx> bins(static_cast<size_t>(cfg.fft_size));
  size_t w = 0;
  for (int sym = 0; sym < kSymbolsPerFrame; ++sym) {
    const int l = sym % kSymbolsPerSlot;
    std::fill(bins.begin(), bins.end(), cplx(0.0));
    const auto& row = grid.symbols[static_cast<size_t>(sym)];
    for (int u = 0; u < cfg.used_subcarriers; ++u)
      bins[static_cast<size_t>(cfg.bin_for_row(u))] = row[static_cast<size_t>(u)];
    const auto body = dsp::ifft_scaled(bins);
    const int ncp = cfg.cp_len(l);
    for (int i = 0; i < ncp; ++i)
      out[w + static_cast<size_t>(i)] = body[static_cast<size_t>(cfg.fft_size - ncp + i)];
    w += static_cast<size_t>(ncp);
    for (int i = 0; i < cfg.fft_size; ++i) out[w + static_cast<size_t>(i)] = body[static_cast<size_t>(i)];
    w += static_cast<size_t>(cfg.fft_size);
  }
  return out;
}

ResourceGrid ofdm_demodulate(std::span<const cplx> samples, size_t frame_start,
                             const GridConfig& cfg) {
  if (samples.size() < frame_start + static_cast<size_t>(cfg.frame_samples()))
    throw std::invalid_argument("ofdm_demodulate: need one full frame of samples");

  ResourceGrid grid(cfg);
  std::vector<cplx> body(static_cast<size_t>(cfg.fft_size));
  size_t r = frame_start;
  for (int sym = 0; sym < kSymbolsPerFrame; ++sym) {
    const int l = sym % kSymbolsPerSlot;
    r += static_cast<size_t>(cfg.cp_len(l));
    for (int i = 0; i < cfg.fft_size; ++i) body[static_cast<size_t>(i)] = samples[r + static_cast<size_t>(i)];
    r += static_cast<size_t>(cfg.fft_size);
    const auto bins = dsp::fft(body);
    auto& row = grid.symbols[static_cast<size_t>(sym)];
    for (int u = 0; u < cfg.used_subcarriers; ++u)
      row[static_cast<size_t>(u)] = bins[static_cast<size_t>(cfg.bin_for_row(u))];
  }
  return grid;
}

ResourceGrid make_downlink_frame(const GridConfig& cfg, uint64_t frame_index,
                                 uint64_t payload_seed) {
  ResourceGrid grid(cfg);
  Rng rng(derive_seed(payload_seed, 0x70a11u, frame_index));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (auto& row : grid.symbols)
    for (auto& re : row)
      re = cplx(inv_sqrt2 * (rng.uniform() < 0.5 ? 1.0 : -1.0),
                inv_sqrt2 * (rng.uniform() < 0.5 ? 1.0 : -1.0));

  for (int ns = 0; ns < kSlotsPerFrame; ++ns) {
    for (const int l : {0, 4}) {
      const auto crs = generate_crs(cfg, ns, l);
      const auto pos = crs_positions(cfg, l);
      auto& row = grid.symbols[static_cast<size_t>(ns * kSymbolsPerSlot + l)];
      for (size_t i = 0; i < pos.size(); ++i) row[static_cast<size_t>(pos[i])] = crs[i];
    }
  }

  const auto rs = generate_reference_signals(cfg);
  const auto sync_pos = sync_positions(cfg);
  for (const int ns : {0, 10}) {
    auto& pss_row = grid.symbols[static_cast<size_t>(ns * kSymbolsPerSlot + 6)];
    auto& sss_row = grid.symbols[static_cast<size_t>(ns * kSymbolsPerSlot + 5)];
    const auto& sss = (ns == 0) ? rs.sss_sf0 : rs.sss_sf5;
    for (size_t i = 0; i < sync_pos.size(); ++i) {
      pss_row[static_cast<size_t>(sync_pos[i])] = rs.pss[i];
      sss_row[static_cast<size_t>(sync_pos[i])] = sss[i];
    }
  }
  return grid;
}

}  // namespace ltecir::phy
