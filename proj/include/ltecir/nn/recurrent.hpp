#pragma once

#include <vector>

#include "ltecir/nn/layers.hpp"
#include "ltecir/nn/tensor.hpp"
#include "ltecir/rng.hpp"

namespace ltecir::nn {

struct RecurrentCache {
  Tensor x;       // [T x D]
  Tensor h;       // [T x H]
  Tensor c;       // LSTM only: [T x H]
  Tensor gates;   // post-activation, [T x 4H] (i,f,g,o) or [T x 3H] (z,r,n)
  std::vector<double> h0, c0;
};

// Standard LSTM: i,f,o sigmoid, candidate g tanh,
// c_t = f*c_{t-1} + i*g,  h_t = o*tanh(c_t).
// Weight layout stacks the gates: wx [4H x D], wh [4H x H], b [4H].
struct Lstm {
  int input_dim = 0, hidden = 0;
  Param wx, wh, b;

  // Glorot input weights, orthogonal recurrent blocks, forget bias 1.
  Lstm(const std::string& name, int input, int hidden_units, Rng& rng);
  // Returns hidden states [T x H]; h0/c0 default to zero.
  Tensor forward(const Tensor& x, RecurrentCache* cache,
                 const std::vector<double>& h0 = {}, const std::vector<double>& c0 = {}) const;
  // dh: upstream gradient on every hidden state [T x H] (zero rows where
  // unused).  Returns dx [T x D]; accumulates parameter gradients; optional
  // gradients on the initial state.
  Tensor backward(const RecurrentCache& cache, const Tensor& dh,
                  std::vector<double>* dh0 = nullptr, std::vector<double>* dc0 = nullptr);
  std::vector<Param*> params() { return {&wx, &wh, &b}; }
};

// GRU, update-gate-keeps-old-state form:
//   z = sig(Wz x + Uz h),  r = sig(Wr x + Ur h),
//   n = tanh(Wn x + Un (r*h)),  h_t = z*h_{t-1} + (1-z)*n.
struct Gru {
  int input_dim = 0, hidden = 0;
  Param wx, wh, b;  // [3H x D], [3H x H], [3H]; gate order z,r,n

  Gru(const std::string& name, int input, int hidden_units, Rng& rng);
  Tensor forward(const Tensor& x, RecurrentCache* cache,
                 const std::vector<double>& h0 = {}) const;
  Tensor backward(const RecurrentCache& cache, const Tensor& dh,
                  std::vector<double>* dh0 = nullptr);
  std::vector<Param*> params() { return {&wx, &wh, &b}; }
};

}  // namespace ltecir::nn
