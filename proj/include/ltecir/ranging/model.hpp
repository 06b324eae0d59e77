#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "ltecir/nn/layers.hpp"
#include "ltecir/nn/recurrent.hpp"
#include "ltecir/ranging/quantize.hpp"

namespace ltecir::ranging {

enum class Variant { kProposed, kBaseline, kComplex };

struct ModelSpec {
  Variant variant = Variant::kProposed;
  int vocab = 256;
  int embed_dim = 128;
  int hidden = 128;
  int n_cir = 64;            // sequence length (tap axis) / baseline input width
  double dropout_rate = 0.0; // applied after hidden activations during training
  bool dense_front_end = false;  // linear per-tap projection instead of quantize+embed
};

Variant variant_from_string(const std::string& s);
std::string variant_to_string(Variant v);

// Per-sample network input; tokens feed the embedding path, norm feeds the
// baseline / dense-front-end paths.
struct ModelInput {
  std::vector<int> tokens;
  std::vector<double> norm;
};

ModelInput make_input(std::span<const double> magnitudes, const ModelSpec& spec, double scale);

struct ForwardCache {
  nn::Tensor seq_in;                     // recurrent-chain input
  nn::Tensor front_in;                   // dense-front-end input [T x 1]
  std::vector<nn::RecurrentCache> rec;   // one per recurrent cell
  std::vector<nn::Tensor> dense_in;      // input to each dense layer
  std::vector<nn::Tensor> dense_pre;     // preactivations (ReLU backward)
  std::vector<nn::Tensor> drop_mask;     // one per dropout site
  std::vector<int> tokens;
};

// The paper's three networks behind one interface:
//   proposed: embedding -> LSTM -> dense(128) -> dense(1)
//   baseline: dense(128) -> dense(1) on the normalized magnitude vector
//   complex:  embedding -> GRU -> LSTM -> dense(128) -> dense(128) -> dense(1)
// Every dense layer is ReLU-activated (including the scalar output); the
// regression head reads the final recurrent hidden state.  Dropout (training
// only) follows the recurrent output and each hidden dense activation.
class RangingModel {
 public:
  RangingModel(const ModelSpec& spec, uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  std::vector<nn::Param*> params();
  int64_t param_count();

  double predict(const ModelInput& in) const;
  // Training-mode forward; caches activations for backward.
  double forward_train(const ModelInput& in, Rng& dropout_rng, ForwardCache& cache);
  // dpred = dLoss/dprediction for this sample; accumulates into Param::grad.
  void backward(const ForwardCache& cache, double dpred);

  // Escape hatch for initializing the output bias at the train-label mean.
  void set_output_bias(double value);

  void save(const std::filesystem::path& path);
  void load(const std::filesystem::path& path);

 private:
  double run_forward(const ModelInput& in, bool training, Rng* rng, ForwardCache* cache) const;

  ModelSpec spec_;
  std::unique_ptr<nn::Embedding> embed_;
  std::unique_ptr<nn::Dense> front_;
  std::unique_ptr<nn::Gru> gru_;
  std::unique_ptr<nn::Lstm> lstm_;
  std::vector<nn::Dense> dense_;
};

}  // namespace ltecir::ranging
