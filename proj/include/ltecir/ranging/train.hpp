#pragma once

#include <filesystem>
#include <vector>

#include "ltecir/nn/optim.hpp"
#include "ltecir/ranging/dataset.hpp"
#include "ltecir/ranging/model.hpp"

namespace ltecir::ranging {

enum class OptimizerKind { kAdam, kSgdDecay };

struct TrainConfig {
  int epochs = 300;
  int batch_size = 32;
  uint64_t seed = 1;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  nn::AdamConfig adam;
  nn::SgdDecayConfig sgd;
  // Default trains on MSE (same argmin, smooth at zero); flag switches to
  // literal Eq. (2) RMSE.  Curves are reported in RMSE meters either way.
  bool train_on_rmse = false;
  // Start the output bias at the train-label mean so the ReLU head begins in
  // the right decade instead of spending epochs climbing from zero.
  bool init_output_bias_to_mean = true;
};

// Per-epoch curves plus total wall time.
struct TrainRecord {
  std::vector<double> train_rmse_m;
  std::vector<double> val_rmse_m;
  double wall_time_s = 0.0;
};

struct PreparedData {
  std::vector<ModelInput> inputs;
  std::vector<double> targets;
  double scale = 0.0;
};

// Builds model inputs for every sample; the quantization scale is the
// dataset-global 99.9th-percentile magnitude.
PreparedData prepare_inputs(const CirDataset& ds, const ModelSpec& spec);

// Minibatch training with mean-squared-error loss.  Throws std::runtime_error
// naming the epoch if the loss goes non-finite.
TrainRecord train_model(RangingModel& model, const PreparedData& data,
                        const std::vector<size_t>& train_idx, const std::vector<size_t>& val_idx,
                        const TrainConfig& cfg);

std::vector<double> predict_all(const RangingModel& model, const PreparedData& data,
                                const std::vector<size_t>& idx);

// Mean-collapse forensics (the failure mode that motivates the simpler model):
// constant_output flags a near-constant predictor; collapse additionally
// requires that constant to sit at the train-label mean.
struct CollapseDiagnosis {
  bool constant_output = false;
  bool collapse = false;
  double pred_mean = 0.0;
  double pred_std = 0.0;
  double train_mean = 0.0;
};

CollapseDiagnosis detect_mean_collapse(const std::vector<double>& preds,
                                       const std::vector<double>& train_targets,
                                       double tol_abs = 0.5, double tol_mean = 1.0);

void write_train_record_csv(const std::filesystem::path& path, const TrainRecord& rec);

}  // namespace ltecir::ranging
