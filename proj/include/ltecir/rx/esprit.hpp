#pragma once

#include <vector>

#include "ltecir/rx/types.hpp"

namespace ltecir::rx {

// Delay estimation from one CFR snapshot: forward-backward spatially smoothed
// covariance (subarrays of length M/2), signal subspace from the top-L
// eigenvectors, rotation operator by least squares.  Returns L delays in
// seconds, ascending; unambiguous within +-1/(2*comb_spacing).
std::vector<double> esprit_delays(const CfrEstimate& cfr, int model_order);

// Model order from eigenvalue thresholding (ratio to the largest eigenvalue),
// capped.
int esprit_model_order(const CfrEstimate& cfr, double ratio_threshold = 1e-3, int cap = 8);

}  // namespace ltecir::rx
