#pragma once

#include <filesystem>

#include "ltecir/sim/scenario.hpp"

namespace ltecir::sim {

struct DatasetPaths {
  std::filesystem::path rover_iq;
  std::filesystem::path base_iq;
  std::filesystem::path truth;       // rover labels
  std::filesystem::path truth_base;
  int frames = 0;
};

// Streams the full scenario through rover and base channels, writing IQ and
// truth tables into out_dir.  One frame per 10 ms epoch; a one-slot tail pad
// follows the last frame so a receiver can demodulate every frame even after
// a small acquisition offset.
DatasetPaths generate_dataset(const ScenarioConfig& sc, const std::filesystem::path& out_dir);

}  // namespace ltecir::sim
