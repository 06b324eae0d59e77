#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ltecir/nn/layers.hpp"

namespace ltecir::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig cfg;
  int64_t step = 0;
  std::vector<std::vector<double>> m, v;  // one slot per parameter tensor
};

AdamState make_adam(const std::vector<Param*>& params, const AdamConfig& cfg = {});
// Bias-corrected update from the gradients currently held in Param::grad.
void adam_step(AdamState& st, const std::vector<Param*>& params);

struct SgdDecayConfig {
  double lr0 = 0.1;
  double decay_steps = 1000.0;
  double decay_rate = 0.96;
  bool staircase = false;  // floor(t/decay_steps) instead of continuous
};

struct SgdDecayState {
  SgdDecayConfig cfg;
  int64_t step = 0;
};

// lr(t) = lr0 * rate^(t / steps), evaluated at the current step count.
double sgd_decay_lr(const SgdDecayState& st);
void sgd_decay_step(SgdDecayState& st, const std::vector<Param*>& params);

// Round-trip serialization so a mid-run restore reproduces the trajectory
// bit for bit.
void save_adam(const std::filesystem::path& path, const AdamState& st);
AdamState load_adam(const std::filesystem::path& path);

}  // namespace ltecir::nn
