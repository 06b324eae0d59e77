#pragma once

#include <span>
#include <string>
#include <vector>

#include "ltecir/nn/tensor.hpp"
#include "ltecir/rng.hpp"

namespace ltecir::nn {

// A trainable tensor with its gradient accumulator.
struct Param {
  std::string name;
  Tensor value;
  Tensor grad;

  Param() = default;
  Param(std::string n, std::vector<int> shape)
      : name(std::move(n)), value(shape), grad(std::move(shape)) {}
};

void zero_grads(const std::vector<Param*>& params);

// y = x W^T + b with x [n x in], W [out x in].
struct Dense {
  Param w, b;

  Dense(const std::string& name, int in, int out, Rng& rng);
  Tensor forward(const Tensor& x) const;
  // dy [n x out] -> dx [n x in]; accumulates parameter gradients.
  Tensor backward(const Tensor& x, const Tensor& dy);
  std::vector<Param*> params() { return {&w, &b}; }
};

// Row lookup into a [V x D] table.
struct Embedding {
  Param table;

  Embedding(const std::string& name, int vocab, int dim, Rng& rng);
  Tensor forward(std::span<const int> tokens) const;  // [T x D]
  void backward(std::span<const int> tokens, const Tensor& dout);
  std::vector<Param*> params() { return {&table}; }
};

Tensor relu_forward(const Tensor& x);
// Subgradient at 0 is 0.
Tensor relu_backward(const Tensor& x, const Tensor& dy);

// Inverted dropout: training zeroes units with probability `rate` and scales
// survivors by 1/(1-rate); inference is the identity.  The returned mask
// holds the applied per-unit factors.
Tensor dropout_forward(const Tensor& x, double rate, Rng& rng, bool training, Tensor* mask);
Tensor dropout_backward(const Tensor& dy, const Tensor& mask);

struct LossResult {
  double value = 0.0;
  std::vector<double> grad;  // d loss / d prediction
};

// Eq-(2)-style RMSE; gradient (p-t)/(n*loss), defined 0 at loss 0.
LossResult rmse_loss(std::span<const double> predictions, std::span<const double> targets);
// Mean squared error (the training surrogate; same argmin).
LossResult mse_loss(std::span<const double> predictions, std::span<const double> targets);

}  // namespace ltecir::nn
