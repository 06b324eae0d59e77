#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ltecir::eval {

// Per-model ranging evaluation: signed errors plus the Table-1-style summary
// statistics and the |error| CDF.
struct RangingReport {
  std::string model_id;
  std::string dataset_id;
  std::vector<double> errors_m;  // prediction - truth, per test sample
  double rmse_m = 0.0;
  double mean_error_m = 0.0;
  double std_m = 0.0;          // population std of signed errors
  double abs_std_m = 0.0;      // population std of |errors| ("std" is ambiguous; emit both)
  double max_abs_error_m = 0.0;
  std::vector<std::pair<double, double>> cdf;  // (|error| m, fraction <=), ends at 1.0
};

RangingReport compute_metrics(std::span<const double> predictions,
                              std::span<const double> truths, const std::string& model_id,
                              const std::string& dataset_id);

}  // namespace ltecir::eval
