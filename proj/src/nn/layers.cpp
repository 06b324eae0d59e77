#include "ltecir/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "ltecir/nn/init.hpp"

namespace ltecir::nn {

void zero_grads(const std::vector<Param*>& params) {
  for (Param* p : params) p->grad.fill(0.0);
}

Dense::Dense(const std::string& name, int in, int out, Rng& rng)
    : w(name + ".w", {out, in}), b(name + ".b", {out}) {
  glorot_uniform(w.value, rng, in, out);
}

Tensor Dense::forward(const Tensor& x) const {
  if (x.cols() != w.value.cols())
    throw std::invalid_argument("dense: input width " + std::to_string(x.cols()) +
                                " != " + std::to_string(w.value.cols()));
  const int n = x.rows(), out = w.value.rows();
  Tensor y({n, out});
  for (int i = 0; i < n; ++i) {
    gemv(w.value, x.row(i), y.row(i), false);
    for (int j = 0; j < out; ++j) y.at(i, j) += b.value.values[static_cast<size_t>(j)];
  }
  return y;
}

Tensor Dense::backward(const Tensor& x, const Tensor& dy) {
  if (dy.rows() != x.rows() || dy.cols() != w.value.rows())
    throw std::invalid_argument("dense backward: shape mismatch");
  const int n = x.rows();
  Tensor dx({n, x.cols()});
  for (int i = 0; i < n; ++i) {
    gemv_t(w.value, dy.row(i), dx.row(i), false);
    outer_acc(w.grad, dy.row(i), x.row(i));
    for (int j = 0; j < dy.cols(); ++j)
      b.grad.values[static_cast<size_t>(j)] += dy.at(i, j);
  }
  return dx;
}

Embedding::Embedding(const std::string& name, int vocab, int dim, Rng& rng)
    : table(name + ".table", {vocab, dim}) {
  gaussian_init(table.value, rng, 0.05);
}

Tensor Embedding::forward(std::span<const int> tokens) const {
  const int v = table.value.rows(), d = table.value.cols();
  Tensor out({static_cast<int>(tokens.size()), d});
  for (size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t] < 0 || tokens[t] >= v)
      throw std::out_of_range("embedding: token " + std::to_string(tokens[t]) +
                              " outside vocabulary of " + std::to_string(v));
    const double* src = table.value.row(tokens[t]);
    double* dst = out.row(static_cast<int>(t));
    for (int j = 0; j < d; ++j) dst[j] = src[j];
  }
  return out;
}

void Embedding::backward(std::span<const int> tokens, const Tensor& dout) {
  if (dout.rows() != static_cast<int>(tokens.size()) || dout.cols() != table.value.cols())
    throw std::invalid_argument("embedding backward: shape mismatch");
  for (size_t t = 0; t < tokens.size(); ++t) {
    double* dst = table.grad.row(tokens[t]);
    const double* src = dout.row(static_cast<int>(t));
    for (int j = 0; j < dout.cols(); ++j) dst[j] += src[j];
  }
}

Tensor relu_forward(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.values) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& dy) {
  if (!x.same_shape(dy)) throw std::invalid_argument("relu backward: shape mismatch");
  Tensor dx = dy;
  for (size_t i = 0; i < dx.values.size(); ++i)
    if (x.values[i] <= 0.0) dx.values[i] = 0.0;
  return dx;
}

Tensor dropout_forward(const Tensor& x, double rate, Rng& rng, bool training, Tensor* mask) {
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout: rate must be in [0,1)");
  Tensor y = x;
  Tensor m = x;
  if (!training || rate == 0.0) {
    m.fill(1.0);
  } else {
    const double keep = 1.0 - rate;
    for (size_t i = 0; i < y.values.size(); ++i) {
      const double f = rng.uniform() < rate ? 0.0 : 1.0 / keep;
      m.values[i] = f;
      y.values[i] *= f;
    }
  }
  if (mask) *mask = std::move(m);
  return y;
}

Tensor dropout_backward(const Tensor& dy, const Tensor& mask) {
  if (!dy.same_shape(mask)) throw std::invalid_argument("dropout backward: shape mismatch");
  Tensor dx = dy;
  for (size_t i = 0; i < dx.values.size(); ++i) dx.values[i] *= mask.values[i];
  return dx;
}

namespace {
void check_pair(std::span<const double> p, std::span<const double> t) {
  if (p.empty() || p.size() != t.size())
    throw std::invalid_argument("loss: prediction/target length mismatch or empty");
}
}  // namespace

LossResult rmse_loss(std::span<const double> predictions, std::span<const double> targets) {
  check_pair(predictions, targets);
  const double n = static_cast<double>(predictions.size());
  LossResult r;
  r.grad.resize(predictions.size(), 0.0);
  double acc = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - targets[i];
    acc += e * e;
  }
  r.value = std::sqrt(acc / n);
  if (r.value > 0.0)
    for (size_t i = 0; i < predictions.size(); ++i)
      r.grad[i] = (predictions[i] - targets[i]) / (n * r.value);
  return r;
}

LossResult mse_loss(std::span<const double> predictions, std::span<const double> targets) {
  check_pair(predictions, targets);
  const double n = static_cast<double>(predictions.size());
  LossResult r;
  r.grad.resize(predictions.size(), 0.0);
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - targets[i];
    r.value += e * e / n;
    r.grad[i] = 2.0 * e / n;
  }
  return r;
}

}  // namespace ltecir::nn
