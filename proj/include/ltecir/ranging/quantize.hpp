#pragma once

#include <span>
#include <vector>

#include "ltecir/ranging/dataset.hpp"

namespace ltecir::ranging {

// 99.9th-percentile magnitude over the whole dataset (linear-interpolated
// percentile); the global normalization scale for quantize_cir.
double normalization_scale(const CirDataset& ds);

// norm = clamp(m/scale, 0, 1); token = floor(norm * (V-1)).  Monotone in m.
std::vector<int> quantize_cir(std::span<const double> magnitudes, int levels, double scale);

// clamp(m/scale, 0, 1) without quantization (baseline / dense-front-end
// input).
std::vector<double> normalize_cir(std::span<const double> magnitudes, double scale);

}  // namespace ltecir::ranging
