#include "ltecir/rx/cfr.hpp"

#include <cmath>
#include <stdexcept>

#include "ltecir/phy/reference_signals.hpp"

namespace ltecir::rx {

CfrEstimate estimate_cfr(std::span<const cplx> row, const phy::GridConfig& cfg,
                         int symbol_index) {
  if (symbol_index < 0 || symbol_index >= phy::kSymbolsPerFrame)
    throw std::invalid_argument("estimate_cfr: bad symbol index");
  const int ns = symbol_index / phy::kSymbolsPerSlot;
  const int l = symbol_index % phy::kSymbolsPerSlot;
  if (!phy::is_crs_symbol(l))
    throw std::invalid_argument("estimate_cfr: symbol " + std::to_string(symbol_index) +
                                " carries no CRS");
  if (row.size() != static_cast<size_t>(cfg.used_subcarriers))
    throw std::invalid_argument("estimate_cfr: row width mismatch");

  const auto ref = phy::generate_crs(cfg, ns, l);
  const auto pos = phy::crs_positions(cfg, l);
  CfrEstimate cfr;
  cfr.values.resize(pos.size());
  for (size_t i = 0; i < pos.size(); ++i)
    cfr.values[i] = row[static_cast<size_t>(pos[i])] / ref[i];
  cfr.comb_spacing_hz = 6.0 * phy::kSubcarrierSpacingHz;
  cfr.first_freq_hz = cfg.row_freq_hz(pos[0]);
  cfr.symbol_index = symbol_index;
  return cfr;
}

double coarse_doppler(const CfrEstimate& a, const CfrEstimate& b, double dt_s) {
  if (dt_s <= 0.0) throw std::invalid_argument("coarse_doppler: dt must be positive");
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("coarse_doppler: comb mismatch");
  cplx acc = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) acc += b.values[i] * std::conj(a.values[i]);
  if (std::abs(acc) == 0.0) throw std::invalid_argument("coarse_doppler: zero-energy CFR");
  return std::arg(acc) / (kTwoPi * dt_s);
}

}  // namespace ltecir::rx
