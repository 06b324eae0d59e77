#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ltecir::nn {

// Row-major 64-bit tensor; rank 1 or 2 everywhere in this stack.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> values;

  Tensor() = default;
  explicit Tensor(std::vector<int> s);

  int64_t numel() const;
  int rows() const { return shape.empty() ? 0 : shape[0]; }
  int cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  double& at(int i, int j) { return values[static_cast<size_t>(i) * cols() + j]; }
  double at(int i, int j) const { return values[static_cast<size_t>(i) * cols() + j]; }
  double* row(int i) { return values.data() + static_cast<size_t>(i) * cols(); }
  const double* row(int i) const { return values.data() + static_cast<size_t>(i) * cols(); }

  void fill(double v);
  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  std::string shape_str() const;
};

// y[r] (+)= W[r x c] * x[c]
void gemv(const Tensor& w, const double* x, double* y, bool accumulate);
// y[c] (+)= W^T * x[r]
void gemv_t(const Tensor& w, const double* x, double* y, bool accumulate);
// W[r x c] += a[r] outer b[c]
void outer_acc(Tensor& w, const double* a, const double* b);

}  // namespace ltecir::nn
