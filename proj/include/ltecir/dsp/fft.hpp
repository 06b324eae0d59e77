#pragma once

#include <span>
#include <vector>

#include "ltecir/common.hpp"

namespace ltecir::dsp {

// Unscaled DFT: X[k] = sum_n x[n] exp(-j 2 pi k n / N)
std::vector<cplx> fft(std::span<const cplx> in);

// Unscaled inverse DFT: x[n] = sum_k X[k] exp(+j 2 pi k n / N)
std::vector<cplx> ifft(std::span<const cplx> in);

// Inverse DFT scaled by 1/N (round trip with fft() is the identity)
std::vector<cplx> ifft_scaled(std::span<const cplx> in);

}  // namespace ltecir::dsp
