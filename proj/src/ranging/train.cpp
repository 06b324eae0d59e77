#include "ltecir/ranging/train.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ltecir/io/csv.hpp"
#include "ltecir/rng.hpp"

namespace ltecir::ranging {

PreparedData prepare_inputs(const CirDataset& ds, const ModelSpec& spec) {
  PreparedData out;
  out.scale = normalization_scale(ds);
  out.inputs.reserve(ds.size());
  for (size_t i = 0; i < ds.size(); ++i)
    out.inputs.push_back(make_input(ds.magnitudes[i], spec, out.scale));
  out.targets = ds.range_m;
  return out;
}

namespace {

double mean_of(const std::vector<double>& targets, const std::vector<size_t>& idx) {
  double s = 0.0;
  for (size_t i : idx) s += targets[i];
  return s / static_cast<double>(idx.size());
}

}  // namespace

TrainRecord train_model(RangingModel& model, const PreparedData& data,
                        const std::vector<size_t>& train_idx, const std::vector<size_t>& val_idx,
                        const TrainConfig& cfg) {
  if (train_idx.empty()) throw std::invalid_argument("train_model: empty training split");
  for (size_t i : train_idx)
    if (i >= data.inputs.size()) throw std::out_of_range("train_model: train index out of range");
  for (size_t i : val_idx)
    if (i >= data.inputs.size()) throw std::out_of_range("train_model: val index out of range");

  TrainRecord rec;
  if (cfg.epochs <= 0) return rec;  // params stay at their initial values
  const auto t0 = std::chrono::steady_clock::now();

  auto params = model.params();
  if (cfg.init_output_bias_to_mean) model.set_output_bias(mean_of(data.targets, train_idx));

  nn::AdamState adam = nn::make_adam(params, cfg.adam);
  nn::SgdDecayState sgd{cfg.sgd, 0};
  Rng shuffle_rng(derive_seed(cfg.seed, 0x50f1e));
  Rng dropout_rng(derive_seed(cfg.seed, 0xd209));

  std::vector<size_t> order = train_idx;
  const size_t n_train = order.size();
  const size_t bsz = static_cast<size_t>(std::max(cfg.batch_size, 1));
  std::vector<ForwardCache> caches;
  std::vector<double> preds, targets;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t i = n_train - 1; i > 0; --i) {
      const size_t j =
          static_cast<size_t>(shuffle_rng.uniform() * static_cast<double>(i + 1));
      std::swap(order[i], order[j]);
    }

    double sq_err_sum = 0.0;
    for (size_t start = 0; start < n_train; start += bsz) {
      const size_t end = std::min(start + bsz, n_train);
      const size_t b = end - start;
      caches.resize(b);
      preds.resize(b);
      targets.resize(b);
      for (size_t k = 0; k < b; ++k) {
        const size_t row = order[start + k];
        preds[k] = model.forward_train(data.inputs[row], dropout_rng, caches[k]);
        targets[k] = data.targets[row];
        const double e = preds[k] - targets[k];
        sq_err_sum += e * e;
      }
      nn::zero_grads(params);
      const nn::LossResult loss =
          cfg.train_on_rmse ? nn::rmse_loss(preds, targets) : nn::mse_loss(preds, targets);
      for (size_t k = 0; k < b; ++k) model.backward(caches[k], loss.grad[k]);
      if (cfg.optimizer == OptimizerKind::kAdam)
        nn::adam_step(adam, params);
      else
        nn::sgd_decay_step(sgd, params);
    }

    const double train_rmse = std::sqrt(sq_err_sum / static_cast<double>(n_train));
    double val_rmse = 0.0;
    if (!val_idx.empty()) {
      double vs = 0.0;
      for (size_t i : val_idx) {
        const double e = model.predict(data.inputs[i]) - data.targets[i];
        vs += e * e;
      }
      val_rmse = std::sqrt(vs / static_cast<double>(val_idx.size()));
    }
    if (!std::isfinite(train_rmse) || !std::isfinite(val_rmse))
      throw std::runtime_error("training diverged (non-finite loss) at epoch " +
                               std::to_string(epoch));
    rec.train_rmse_m.push_back(train_rmse);
    rec.val_rmse_m.push_back(val_rmse);
  }

  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<double> predict_all(const RangingModel& model, const PreparedData& data,
                                const std::vector<size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (size_t i : idx) out.push_back(model.predict(data.inputs.at(i)));
  return out;
}

CollapseDiagnosis detect_mean_collapse(const std::vector<double>& preds,
                                       const std::vector<double>& train_targets, double tol_abs,
                                       double tol_mean) {
  if (preds.empty() || train_targets.empty())
    throw std::invalid_argument("detect_mean_collapse: empty input");
  CollapseDiagnosis d;
  double s = 0.0;
  for (double p : preds) s += p;
  d.pred_mean = s / static_cast<double>(preds.size());
  double v = 0.0;
  for (double p : preds) v += (p - d.pred_mean) * (p - d.pred_mean);
  d.pred_std = std::sqrt(v / static_cast<double>(preds.size()));
  double t = 0.0;
  for (double x : train_targets) t += x;
  d.train_mean = t / static_cast<double>(train_targets.size());
  d.constant_output = d.pred_std < tol_abs;
  d.collapse = d.constant_output && std::abs(d.pred_mean - d.train_mean) < tol_mean;
  return d;
}

void write_train_record_csv(const std::filesystem::path& path, const TrainRecord& rec) {
  io::CsvWriter w(path, {"epoch", "train_rmse_m", "val_rmse_m"});
  for (size_t i = 0; i < rec.train_rmse_m.size(); ++i)
    w.row({static_cast<double>(i), rec.train_rmse_m[i], rec.val_rmse_m[i]});
  w.close();
}

}  // namespace ltecir::ranging
