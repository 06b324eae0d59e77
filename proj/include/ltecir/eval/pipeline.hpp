#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "ltecir/eval/compare.hpp"
#include "ltecir/eval/metrics.hpp"
#include "ltecir/ranging/train.hpp"

namespace ltecir::eval {

struct ModelArtifacts {
  RangingReport report;
  ranging::TrainRecord record;  // loss curves; may be empty (e.g. strawman)
};

// Writes the evaluation artifact set into out_dir (created if needed), all
// write-temp-then-rename:
//   metrics.json                 every model's summary (+ comparison if given)
//   report.txt                   rendered comparison table with footnote
//   comparison.csv               metric,a,b,improvement rows
//   cdf_<model>.csv              error_m,fraction
//   errors_<model>.csv           sample_index,error_m
//   loss_<model>.csv             epoch,train_rmse_m,val_rmse_m (when recorded)
void emit_artifacts(const std::vector<ModelArtifacts>& models,
                    const std::optional<Comparison>& comparison,
                    const std::filesystem::path& out_dir);

}  // namespace ltecir::eval
