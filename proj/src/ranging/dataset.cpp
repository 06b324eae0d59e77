#include "ltecir/ranging/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ltecir/io/csv.hpp"
#include "ltecir/rng.hpp"

namespace ltecir::ranging {

CirDataset load_cir_csv(const std::filesystem::path& path) {
  const auto t = io::read_csv(path);
  const int label = t.col("true_range_m");
  if (label < 0) throw std::runtime_error("cir table missing true_range_m: " + path.string());
  std::vector<int> mag_cols;
  for (size_t c = 0; c < t.header.size(); ++c)
    if (t.header[c].rfind("mag_", 0) == 0) mag_cols.push_back(static_cast<int>(c));
  if (mag_cols.empty()) throw std::runtime_error("cir table has no mag_ columns: " + path.string());

  CirDataset ds;
  for (const auto& row : t.rows) {
    const double r = row[static_cast<size_t>(label)];
    if (!std::isfinite(r)) continue;
    std::vector<double> mags(mag_cols.size());
    for (size_t i = 0; i < mag_cols.size(); ++i)
      mags[i] = row[static_cast<size_t>(mag_cols[i])];
    ds.magnitudes.push_back(std::move(mags));
    ds.range_m.push_back(r);
  }
  return ds;
}

Split split_dataset(size_t n, uint64_t seed, bool chronological) {
  if (n < 5) throw std::invalid_argument("split: need at least 5 samples");
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  if (!chronological) {
    Rng rng(derive_seed(seed, 0x5b117));
    // Fisher-Yates with our own RNG so splits are stable across platforms.
    for (size_t i = n - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(rng.uniform() * static_cast<double>(i + 1));
      std::swap(idx[i], idx[std::min(j, i)]);
    }
  }
  const size_t n_train = static_cast<size_t>(0.6 * static_cast<double>(n));
  const size_t n_val = static_cast<size_t>(0.2 * static_cast<double>(n));
  Split s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<long>(n_train));
  s.val.assign(idx.begin() + static_cast<long>(n_train),
               idx.begin() + static_cast<long>(n_train + n_val));
  s.test.assign(idx.begin() + static_cast<long>(n_train + n_val), idx.end());
  return s;
}

}  // namespace ltecir::ranging
