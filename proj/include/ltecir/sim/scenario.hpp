#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ltecir/sim/trajectory.hpp"

namespace ltecir::sim {

// Everything that determines a synthetic capture; `seed` fixes all random
// draws (multipath, clock walk, payload, noise).
struct ScenarioConfig {
  double bandwidth_mhz = 10.0;
  int cell_id = 383;
  double carrier_frequency_hz = 2.145e9;

  Vec3 enodeb_position{280.0, 160.0, 35.0};
  Vec3 base_position{5.0, -8.0, 1.5};
  Trajectory trajectory = rectangle_trajectory({0.0, 0.0, 1.5}, 34.5, 20.0, 50.0);

  int n_taps = 8;                        // LOS + (n_taps-1) NLOS
  double delay_spread_ns = 300.0;        // exponential PDP constant
  double rician_k_db = 3.0;              // LOS/NLOS power ratio
  double tap_corr = 0.95;                // per-frame Gauss-Markov coefficient
  double snr_db = 15.0;
  double clock_walk_ns_per_sqrt_s = 0.3;

  uint64_t seed = 1;

  int frames() const {
    return static_cast<int>(std::lround(trajectory.duration() / 0.010));
  }
  void validate() const;
};

std::string scenario_to_json(const ScenarioConfig& sc);
ScenarioConfig scenario_from_json(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace ltecir::sim
