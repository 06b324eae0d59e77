#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace ltecir::ranging {

// One row per tracked frame: CIR magnitudes plus the truth label.
struct CirDataset {
  std::vector<std::vector<double>> magnitudes;
  std::vector<double> range_m;

  size_t size() const { return range_m.size(); }
  int n_cir() const { return magnitudes.empty() ? 0 : static_cast<int>(magnitudes[0].size()); }
};

// Reads the receiver's cir.csv (frame,true_range_m,mag_*).  Rows without a
// finite label are dropped.
CirDataset load_cir_csv(const std::filesystem::path& path);

struct Split {
  std::vector<size_t> train, val, test;
};

// 60/20/20 split: floor(0.6n)/floor(0.2n)/remainder.  Random shuffle by
// default, chronological blocks when requested.
Split split_dataset(size_t n, uint64_t seed, bool chronological = false);

}  // namespace ltecir::ranging
