#include "ltecir/nn/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltecir::nn {

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)) {
  int64_t n = 1;
  for (const int d : shape) {
    if (d <= 0) throw std::invalid_argument("tensor: non-positive dimension");
    n *= d;
  }
  values.assign(static_cast<size_t>(n), 0.0);
}

int64_t Tensor::numel() const { return static_cast<int64_t>(values.size()); }

void Tensor::fill(double v) { std::fill(values.begin(), values.end(), v); }

std::string Tensor::shape_str() const {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i)
    s += (i ? "x" : "") + std::to_string(shape[i]);
  return s + "]";
}

void gemv(const Tensor& w, const double* x, double* y, bool accumulate) {
  const int r = w.rows(), c = w.cols();
  for (int i = 0; i < r; ++i) {
    const double* wi = w.row(i);
    double acc = accumulate ? y[i] : 0.0;
    for (int j = 0; j < c; ++j) acc += wi[j] * x[j];
    y[i] = acc;
  }
}

void gemv_t(const Tensor& w, const double* x, double* y, bool accumulate) {
  const int r = w.rows(), c = w.cols();
  if (!accumulate) std::fill(y, y + c, 0.0);
  for (int i = 0; i < r; ++i) {
    const double* wi = w.row(i);
    const double xi = x[i];
    for (int j = 0; j < c; ++j) y[j] += wi[j] * xi;
  }
}

void outer_acc(Tensor& w, const double* a, const double* b) {
  const int r = w.rows(), c = w.cols();
  for (int i = 0; i < r; ++i) {
    double* wi = w.row(i);
    const double ai = a[i];
    for (int j = 0; j < c; ++j) wi[j] += ai * b[j];
  }
}

}  // namespace ltecir::nn
