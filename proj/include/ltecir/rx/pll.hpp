#pragma once

#include "ltecir/rx/types.hpp"

namespace ltecir::rx {

struct LoopConfig {
  double bandwidth_hz = 10.0;
  double damping = 0.7071067811865476;
  double update_period_s = 0.010;  // T_f
};

// omega_n for a given noise bandwidth and damping.
double loop_natural_freq(double bandwidth_hz, double damping);

// One discriminator + second-order filter update on an integrated prompt
// value.  e = angle(prompt * exp(-j phase)); v_PLL (rad/s) advances the
// carrier phase and doppler estimate.  Zero/non-finite prompt holds the state
// and drops lock.
TrackingState pll_update(TrackingState st, cplx prompt, const LoopConfig& lc);

// Spec-shaped wrapper: prompt = sum of the CFR values.
TrackingState pll_step(const TrackingState& st, const CfrEstimate& cfr, const LoopConfig& lc);

// Eq-style TOA step from the loop output, in samples.  Literal scale:
// -(T_f/T_s) * v_cycles; dimensional scale divides by the carrier frequency
// to convert carrier cycles to propagation delay.
double eq1_delta_samples(double v_pll_rad_s, Eq1Scale scale, double frame_s, double sample_s,
                         double carrier_hz);

}  // namespace ltecir::rx
