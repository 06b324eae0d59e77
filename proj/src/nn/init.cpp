#include "ltecir/nn/init.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace ltecir::nn {

void glorot_uniform(Tensor& w, Rng& rng, int fan_in, int fan_out) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (auto& v : w.values) v = (2.0 * rng.uniform() - 1.0) * limit;
}

void gaussian_init(Tensor& w, Rng& rng, double stddev) {
  for (auto& v : w.values) v = stddev * rng.gaussian();
}

void orthogonal_init(Tensor& w, Rng& rng) {
  const int n = w.cols();
  if (w.rows() % n != 0)
    throw std::invalid_argument("orthogonal_init: rows must be a multiple of cols");
  for (int blk = 0; blk < w.rows() / n; ++blk) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w.at(blk * n + i, j) = q(i, j);
  }
}

}  // namespace ltecir::nn
