#pragma once

#include "ltecir/nn/tensor.hpp"
#include "ltecir/rng.hpp"

namespace ltecir::nn {

// Uniform(+-sqrt(6/(fan_in+fan_out))), the Glorot heuristic.
void glorot_uniform(Tensor& w, Rng& rng, int fan_in, int fan_out);

// Gaussian N(0, stddev^2).
void gaussian_init(Tensor& w, Rng& rng, double stddev);

// Fills a stack of square [n x n] blocks with independent orthogonal
// matrices (QR of a Gaussian draw, sign-fixed so the factorization is
// unique).  w must be [k*n x n].
void orthogonal_init(Tensor& w, Rng& rng);

}  // namespace ltecir::nn
