#include "ltecir/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltecir::eval {

RangingReport compute_metrics(std::span<const double> predictions,
                              std::span<const double> truths, const std::string& model_id,
                              const std::string& dataset_id) {
  if (predictions.empty()) throw std::invalid_argument("compute_metrics: empty input");
  if (predictions.size() != truths.size())
    throw std::invalid_argument("compute_metrics: length mismatch");

  RangingReport r;
  r.model_id = model_id;
  r.dataset_id = dataset_id;
  const size_t n = predictions.size();
  r.errors_m.resize(n);
  for (size_t i = 0; i < n; ++i) r.errors_m[i] = predictions[i] - truths[i];

  double sum = 0.0, sq = 0.0, abs_sum = 0.0;
  std::vector<double> abs_err(n);
  for (size_t i = 0; i < n; ++i) {
    sum += r.errors_m[i];
    sq += r.errors_m[i] * r.errors_m[i];
    abs_err[i] = std::abs(r.errors_m[i]);
    abs_sum += abs_err[i];
  }
  const double dn = static_cast<double>(n);
  r.mean_error_m = sum / dn;
  r.rmse_m = std::sqrt(sq / dn);
  double var = 0.0, abs_var = 0.0;
  const double abs_mean = abs_sum / dn;
  for (size_t i = 0; i < n; ++i) {
    var += (r.errors_m[i] - r.mean_error_m) * (r.errors_m[i] - r.mean_error_m);
    abs_var += (abs_err[i] - abs_mean) * (abs_err[i] - abs_mean);
  }
  r.std_m = std::sqrt(var / dn);
  r.abs_std_m = std::sqrt(abs_var / dn);

  std::sort(abs_err.begin(), abs_err.end());
  r.max_abs_error_m = abs_err.back();
  for (size_t i = 0; i < n; ++i)
    if (i + 1 == n || abs_err[i + 1] != abs_err[i])
      r.cdf.emplace_back(abs_err[i], static_cast<double>(i + 1) / dn);
  return r;
}

}  // namespace ltecir::eval
