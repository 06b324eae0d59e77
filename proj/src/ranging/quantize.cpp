#include "ltecir/ranging/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltecir::ranging {

double normalization_scale(const CirDataset& ds) {
  std::vector<double> all;
  for (const auto& row : ds.magnitudes) all.insert(all.end(), row.begin(), row.end());
  if (all.empty()) throw std::invalid_argument("normalization_scale: empty dataset");
  std::sort(all.begin(), all.end());
  const double pos = 0.999 * static_cast<double>(all.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  const double scale = lo + 1 < all.size() ? all[lo] * (1.0 - frac) + all[lo + 1] * frac
                                           : all[lo];
  if (!(scale > 0.0)) throw std::invalid_argument("normalization_scale: non-positive scale");
  return scale;
}

std::vector<int> quantize_cir(std::span<const double> magnitudes, int levels, double scale) {
  if (levels < 2) throw std::invalid_argument("quantize: need at least 2 levels");
  if (!(scale > 0.0)) throw std::invalid_argument("quantize: scale must be positive");
  std::vector<int> tokens(magnitudes.size());
  for (size_t i = 0; i < magnitudes.size(); ++i) {
    if (magnitudes[i] < 0.0) throw std::invalid_argument("quantize: negative magnitude");
    const double norm = std::clamp(magnitudes[i] / scale, 0.0, 1.0);
    tokens[i] = std::min(static_cast<int>(norm * (levels - 1)), levels - 1);
  }
  return tokens;
}

std::vector<double> normalize_cir(std::span<const double> magnitudes, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("normalize: scale must be positive");
  std::vector<double> out(magnitudes.size());
  for (size_t i = 0; i < magnitudes.size(); ++i) {
    if (magnitudes[i] < 0.0) throw std::invalid_argument("normalize: negative magnitude");
    out[i] = std::clamp(magnitudes[i] / scale, 0.0, 1.0);
  }
  return out;
}

}  // namespace ltecir::ranging
