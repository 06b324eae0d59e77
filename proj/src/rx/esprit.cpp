#include "ltecir/rx/esprit.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Dense>

namespace ltecir::rx {

namespace {

Eigen::MatrixXcd smoothed_covariance(const CfrEstimate& cfr) {
  const int m = static_cast<int>(cfr.values.size());
  if (m < 4) throw std::invalid_argument("esprit: CFR too short");
  const int w = m / 2;
  const int k = m - w + 1;
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(w, w);
  for (int i = 0; i < k; ++i) {
    Eigen::Map<const Eigen::VectorXcd> x(cfr.values.data() + i, w);
    r.noalias() += x * x.adjoint();
  }
  r /= static_cast<double>(k);
  // Forward-backward averaging: R <- (R + J conj(R) J) / 2.
  Eigen::MatrixXcd rb(w, w);
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) rb(i, j) = std::conj(r(w - 1 - i, w - 1 - j));
  return 0.5 * (r + rb);
}

}  // namespace

std::vector<double> esprit_delays(const CfrEstimate& cfr, int model_order) {
  if (model_order < 1) throw std::invalid_argument("esprit: model order must be >= 1");
  const auto r = smoothed_covariance(cfr);
  const int w = static_cast<int>(r.rows());
  if (model_order >= w)
    throw std::invalid_argument("esprit: model order " + std::to_string(model_order) +
                                " exceeds subarray length " + std::to_string(w));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
  if (es.info() != Eigen::Success) throw std::runtime_error("esprit: eigendecomposition failed");
  // Eigenvalues ascending; signal subspace = last model_order columns.
  const Eigen::MatrixXcd sub = es.eigenvectors().rightCols(model_order);
  const Eigen::MatrixXcd e1 = sub.topRows(w - 1);
  const Eigen::MatrixXcd e2 = sub.bottomRows(w - 1);
  const Eigen::MatrixXcd psi = e1.colPivHouseholderQr().solve(e2);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(psi);
  if (ces.info() != Eigen::Success) throw std::runtime_error("esprit: rotation eig failed");

  std::vector<double> delays(static_cast<size_t>(model_order));
  for (int i = 0; i < model_order; ++i)
    delays[static_cast<size_t>(i)] = -std::arg(ces.eigenvalues()(i)) / (kTwoPi * cfr.comb_spacing_hz);
  std::sort(delays.begin(), delays.end());
  return delays;
}

int esprit_model_order(const CfrEstimate& cfr, double ratio_threshold, int cap) {
  const auto r = smoothed_covariance(cfr);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
  if (es.info() != Eigen::Success) throw std::runtime_error("esprit: eigendecomposition failed");
  const auto& ev = es.eigenvalues();
  const int w = static_cast<int>(ev.size());
  const double top = ev(w - 1);
  if (top <= 0.0) throw std::runtime_error("esprit: rank-deficient covariance");
  int order = 0;
  for (int i = w - 1; i >= 0 && order < cap; --i) {
    if (ev(i) > ratio_threshold * top)
      ++order;
    else
      break;
  }
  return std::max(order, 1);
}

}  // namespace ltecir::rx
