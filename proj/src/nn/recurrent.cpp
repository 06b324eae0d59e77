#include "ltecir/nn/recurrent.hpp"

#include <cmath>
#include <stdexcept>

#include "ltecir/nn/init.hpp"

namespace ltecir::nn {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Block operations on consecutive rows [r0, r0+rows) of a stacked matrix.
void mv(const Tensor& w, int r0, int rows, const double* x, double* y, bool acc) {
  const int c = w.cols();
  for (int i = 0; i < rows; ++i) {
    const double* wi = w.row(r0 + i);
    double s = acc ? y[i] : 0.0;
    for (int j = 0; j < c; ++j) s += wi[j] * x[j];
    y[i] = s;
  }
}

void mtv(const Tensor& w, int r0, int rows, const double* x, double* y, bool acc) {
  const int c = w.cols();
  if (!acc)
    for (int j = 0; j < c; ++j) y[j] = 0.0;
  for (int i = 0; i < rows; ++i) {
    const double* wi = w.row(r0 + i);
    const double xi = x[i];
    for (int j = 0; j < c; ++j) y[j] += wi[j] * xi;
  }
}

void outer(Tensor& w, int r0, int rows, const double* a, const double* b) {
  const int c = w.cols();
  for (int i = 0; i < rows; ++i) {
    double* wi = w.row(r0 + i);
    const double ai = a[i];
    for (int j = 0; j < c; ++j) wi[j] += ai * b[j];
  }
}

std::vector<double> state_or_zero(const std::vector<double>& s, int h, const char* what) {
  if (s.empty()) return std::vector<double>(static_cast<size_t>(h), 0.0);
  if (static_cast<int>(s.size()) != h)
    throw std::invalid_argument(std::string(what) + ": initial state size mismatch");
  return s;
}

}  // namespace

Lstm::Lstm(const std::string& name, int input, int hidden_units, Rng& rng)
    : input_dim(input),
      hidden(hidden_units),
      wx(name + ".wx", {4 * hidden_units, input}),
      wh(name + ".wh", {4 * hidden_units, hidden_units}),
      b(name + ".b", {4 * hidden_units}) {
  glorot_uniform(wx.value, rng, input, hidden_units);
  orthogonal_init(wh.value, rng);
  for (int j = 0; j < hidden; ++j) b.value.values[static_cast<size_t>(hidden + j)] = 1.0;
}

Tensor Lstm::forward(const Tensor& x, RecurrentCache* cache, const std::vector<double>& h0,
                     const std::vector<double>& c0) const {
  if (x.cols() != input_dim) throw std::invalid_argument("lstm: input width mismatch");
  const int t_len = x.rows(), h = hidden;
  Tensor hs({t_len, h}), cs({t_len, h}), gates({t_len, 4 * h});
  std::vector<double> hp = state_or_zero(h0, h, "lstm");
  std::vector<double> cp = state_or_zero(c0, h, "lstm");
  std::vector<double> pre(static_cast<size_t>(4 * h));

  for (int t = 0; t < t_len; ++t) {
    mv(wx.value, 0, 4 * h, x.row(t), pre.data(), false);
    mv(wh.value, 0, 4 * h, hp.data(), pre.data(), true);
    for (int j = 0; j < 4 * h; ++j) pre[static_cast<size_t>(j)] += b.value.values[static_cast<size_t>(j)];
    double* g = gates.row(t);
    for (int j = 0; j < h; ++j) {
      g[j] = sigmoid(pre[static_cast<size_t>(j)]);                      // i
      g[h + j] = sigmoid(pre[static_cast<size_t>(h + j)]);              // f
      g[2 * h + j] = std::tanh(pre[static_cast<size_t>(2 * h + j)]);    // g
      g[3 * h + j] = sigmoid(pre[static_cast<size_t>(3 * h + j)]);      // o
    }
    for (int j = 0; j < h; ++j) {
      const double c_t = g[h + j] * cp[static_cast<size_t>(j)] + g[j] * g[2 * h + j];
      cs.at(t, j) = c_t;
      hs.at(t, j) = g[3 * h + j] * std::tanh(c_t);
    }
    hp.assign(hs.row(t), hs.row(t) + h);
    cp.assign(cs.row(t), cs.row(t) + h);
  }

  if (cache) {
    cache->x = x;
    cache->h = hs;
    cache->c = cs;
    cache->gates = std::move(gates);
    cache->h0 = state_or_zero(h0, h, "lstm");
    cache->c0 = state_or_zero(c0, h, "lstm");
  }
  return hs;
}

Tensor Lstm::backward(const RecurrentCache& cache, const Tensor& dh, std::vector<double>* dh0,
                      std::vector<double>* dc0) {
  const int t_len = cache.x.rows(), h = hidden;
  if (dh.rows() != t_len || dh.cols() != h)
    throw std::invalid_argument("lstm backward: gradient shape mismatch");
  Tensor dx({t_len, input_dim});
  std::vector<double> dh_rec(static_cast<size_t>(h), 0.0), dc_rec(static_cast<size_t>(h), 0.0);
  std::vector<double> da(static_cast<size_t>(4 * h));

  for (int t = t_len - 1; t >= 0; --t) {
    const double* g = cache.gates.row(t);
    const double* c_prev = t > 0 ? cache.c.row(t - 1) : cache.c0.data();
    const double* h_prev = t > 0 ? cache.h.row(t - 1) : cache.h0.data();
    for (int j = 0; j < h; ++j) {
      const double i_g = g[j], f_g = g[h + j], g_g = g[2 * h + j], o_g = g[3 * h + j];
      const double tc = std::tanh(cache.c.at(t, j));
      const double dht = dh.at(t, j) + dh_rec[static_cast<size_t>(j)];
      const double dct = dc_rec[static_cast<size_t>(j)] + dht * o_g * (1.0 - tc * tc);
      da[static_cast<size_t>(j)] = dct * g_g * i_g * (1.0 - i_g);
      da[static_cast<size_t>(h + j)] = dct * c_prev[j] * f_g * (1.0 - f_g);
      da[static_cast<size_t>(2 * h + j)] = dct * i_g * (1.0 - g_g * g_g);
      da[static_cast<size_t>(3 * h + j)] = dht * tc * o_g * (1.0 - o_g);
      dc_rec[static_cast<size_t>(j)] = dct * f_g;
    }
    outer(wx.grad, 0, 4 * h, da.data(), cache.x.row(t));
    outer(wh.grad, 0, 4 * h, da.data(), h_prev);
    for (int j = 0; j < 4 * h; ++j) b.grad.values[static_cast<size_t>(j)] += da[static_cast<size_t>(j)];
    mtv(wx.value, 0, 4 * h, da.data(), dx.row(t), false);
    mtv(wh.value, 0, 4 * h, da.data(), dh_rec.data(), false);
  }
  if (dh0) *dh0 = dh_rec;
  if (dc0) *dc0 = dc_rec;
  return dx;
}

Gru::Gru(const std::string& name, int input, int hidden_units, Rng& rng)
    : input_dim(input),
      hidden(hidden_units),
      wx(name + ".wx", {3 * hidden_units, input}),
      wh(name + ".wh", {3 * hidden_units, hidden_units}),
      b(name + ".b", {3 * hidden_units}) {
  glorot_uniform(wx.value, rng, input, hidden_units);
  orthogonal_init(wh.value, rng);
}

Tensor Gru::forward(const Tensor& x, RecurrentCache* cache, const std::vector<double>& h0) const {
  if (x.cols() != input_dim) throw std::invalid_argument("gru: input width mismatch");
  const int t_len = x.rows(), h = hidden;
  Tensor hs({t_len, h}), gates({t_len, 3 * h});
  std::vector<double> hp = state_or_zero(h0, h, "gru");
  std::vector<double> pre(static_cast<size_t>(3 * h)), rh(static_cast<size_t>(h));

  for (int t = 0; t < t_len; ++t) {
    // z and r see h_{t-1}; the candidate n sees r*h_{t-1}.
    mv(wx.value, 0, 3 * h, x.row(t), pre.data(), false);
    mv(wh.value, 0, 2 * h, hp.data(), pre.data(), true);
    double* g = gates.row(t);
    for (int j = 0; j < h; ++j) {
      g[j] = sigmoid(pre[static_cast<size_t>(j)] + b.value.values[static_cast<size_t>(j)]);
      g[h + j] =
          sigmoid(pre[static_cast<size_t>(h + j)] + b.value.values[static_cast<size_t>(h + j)]);
      rh[static_cast<size_t>(j)] = g[h + j] * hp[static_cast<size_t>(j)];
    }
    mv(wh.value, 2 * h, h, rh.data(), pre.data() + 2 * h, true);
    for (int j = 0; j < h; ++j) {
      g[2 * h + j] = std::tanh(pre[static_cast<size_t>(2 * h + j)] +
                               b.value.values[static_cast<size_t>(2 * h + j)]);
      hs.at(t, j) = g[j] * hp[static_cast<size_t>(j)] + (1.0 - g[j]) * g[2 * h + j];
    }
    hp.assign(hs.row(t), hs.row(t) + h);
  }

  if (cache) {
    cache->x = x;
    cache->h = hs;
    cache->gates = std::move(gates);
    cache->h0 = state_or_zero(h0, h, "gru");
  }
  return hs;
}

Tensor Gru::backward(const RecurrentCache& cache, const Tensor& dh, std::vector<double>* dh0) {
  const int t_len = cache.x.rows(), h = hidden;
  if (dh.rows() != t_len || dh.cols() != h)
    throw std::invalid_argument("gru backward: gradient shape mismatch");
  Tensor dx({t_len, input_dim});
  std::vector<double> dh_rec(static_cast<size_t>(h), 0.0);
  std::vector<double> daz(static_cast<size_t>(h)), dar(static_cast<size_t>(h)),
      dan(static_cast<size_t>(h)), q(static_cast<size_t>(h)), rh(static_cast<size_t>(h));

  for (int t = t_len - 1; t >= 0; --t) {
    const double* g = cache.gates.row(t);
    const double* h_prev = t > 0 ? cache.h.row(t - 1) : cache.h0.data();
    for (int j = 0; j < h; ++j) {
      const double z = g[j], n = g[2 * h + j];
      const double dht = dh.at(t, j) + dh_rec[static_cast<size_t>(j)];
      daz[static_cast<size_t>(j)] = dht * (h_prev[j] - n) * z * (1.0 - z);
      dan[static_cast<size_t>(j)] = dht * (1.0 - z) * (1.0 - n * n);
      rh[static_cast<size_t>(j)] = g[h + j] * h_prev[j];
      // Partial of h_t through the direct z*h_{t-1} term.
      dh_rec[static_cast<size_t>(j)] = dht * z;
    }
    mtv(wh.value, 2 * h, h, dan.data(), q.data(), false);  // d(r*h_prev)
    for (int j = 0; j < h; ++j) {
      const double r = g[h + j];
      dar[static_cast<size_t>(j)] = q[static_cast<size_t>(j)] * h_prev[j] * r * (1.0 - r);
      dh_rec[static_cast<size_t>(j)] += q[static_cast<size_t>(j)] * r;
    }
    mtv(wh.value, 0, h, daz.data(), dh_rec.data(), true);
    mtv(wh.value, h, h, dar.data(), dh_rec.data(), true);

    mtv(wx.value, 0, h, daz.data(), dx.row(t), false);
    mtv(wx.value, h, h, dar.data(), dx.row(t), true);
    mtv(wx.value, 2 * h, h, dan.data(), dx.row(t), true);

    outer(wx.grad, 0, h, daz.data(), cache.x.row(t));
    outer(wx.grad, h, h, dar.data(), cache.x.row(t));
    outer(wx.grad, 2 * h, h, dan.data(), cache.x.row(t));
    outer(wh.grad, 0, h, daz.data(), h_prev);
    outer(wh.grad, h, h, dar.data(), h_prev);
    outer(wh.grad, 2 * h, h, dan.data(), rh.data());
    for (int j = 0; j < h; ++j) {
      b.grad.values[static_cast<size_t>(j)] += daz[static_cast<size_t>(j)];
      b.grad.values[static_cast<size_t>(h + j)] += dar[static_cast<size_t>(j)];
      b.grad.values[static_cast<size_t>(2 * h + j)] += dan[static_cast<size_t>(j)];
    }
  }
  if (dh0) *dh0 = dh_rec;
  return dx;
}

}  // namespace ltecir::nn
