#include "ltecir/phy/grid.hpp"

#include <stdexcept>

namespace ltecir::phy {

GridConfig make_grid_config(double bandwidth_mhz, int cell_id) {
  if (cell_id < 0 || cell_id > 503)
    throw std::invalid_argument("cell_id out of range [0, 503]: " + std::to_string(cell_id));

  struct Entry {
    double bw;
    int fft;
    int used;
  };
  static constexpr Entry kTable[] = {
      {1.4, 128, 72},  {3.0, 256, 180},  {5.0, 512, 300},
      {10.0, 1024, 600}, {15.0, 1536, 900}, {20.0, 2048, 1200},
  };

  for (const auto& e : kTable) {
    if (bandwidth_mhz == e.bw) {
      GridConfig cfg;
      cfg.bandwidth_mhz = e.bw;
      cfg.cell_id = cell_id;
      cfg.fft_size = e.fft;
      cfg.used_subcarriers = e.used;
      cfg.sampling_rate_hz = e.fft * kSubcarrierSpacingHz;
      cfg.cp0 = e.fft * 160 / 2048;
      cfg.cp = e.fft * 144 / 2048;
      return cfg;
    }
  }
  throw std::invalid_argument("unsupported bandwidth (MHz): " + std::to_string(bandwidth_mhz));
}

}  // namespace ltecir::phy
