#pragma once

#include <cstdint>
#include <vector>

#include "ltecir/common.hpp"

namespace ltecir::rx {

enum class Align { kToa, kPeak };
enum class Eq1Scale { kLiteral, kDimensional };

struct ReceiverConfig {
  int n_cir = 100;
  Align align = Align::kToa;
  Eq1Scale eq1_scale = Eq1Scale::kDimensional;
  double loop_bandwidth_hz = 10.0;
  double damping = 0.7071067811865476;
  double acq_threshold = 2.0;
  int max_model_order = 8;
  double eig_ratio_threshold = 1e-3;
};

struct AcquisitionResult {
  int cell_id = 0;
  size_t coarse_frame_start = 0;
  double correlation_peak_ratio = 1.0;
};

struct CfrEstimate {
  std::vector<cplx> values;     // per CRS comb point, ascending frequency
  double comb_spacing_hz = 0.0; // 6 x 15 kHz
  double first_freq_hz = 0.0;   // baseband frequency of values[0]
  int symbol_index = 0;         // 0..139 within the frame
};

struct TrackingState {
  double toa_samples = 0.0;       // absolute propagation delay estimate, samples
  double carrier_phase_rad = 0.0; // at frame start
  double doppler_hz = 0.0;
  double integrator_rad_s = 0.0;  // second-order loop accumulator
  double v_pll_rad_s = 0.0;       // loop filter output
  bool lock = false;
};

struct CirSample {
  std::vector<double> magnitudes;
  int64_t frame_index = 0;
  double toa_samples = 0.0;
  double true_range_m = 0.0;
};

struct TrackingLogRow {
  int64_t frame = 0;
  double toa_samples = 0.0;
  double doppler_hz = 0.0;
  bool lock = false;
};

}  // namespace ltecir::rx
