#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ltecir/common.hpp"
#include "ltecir/rng.hpp"
#include "ltecir/sim/scenario.hpp"

namespace ltecir::sim {

struct Tap {
  double delay_s = 0.0;
  cplx gain{1.0, 0.0};
};

struct ChannelRealization {
  std::vector<Tap> taps;     // sorted by delay; taps[0] is the LOS path
  double doppler_hz = 0.0;   // carrier Doppler (geometric)
  double snr_db = 0.0;       // +inf disables noise
  double clock_bias_s = 0.0; // eNodeB clock bias at this epoch
};

// Filters `count` samples through the tap set using 64-tap Kaiser-windowed
// sinc fractional delays.  `ext` is an extended input buffer; output sample i
// corresponds to ext[origin + i].  The buffer must provide
// max_integer_delay + 32 samples of history before `origin` and 32 samples
// beyond origin + count.
std::vector<cplx> apply_taps(std::span<const cplx> ext, size_t origin, size_t count,
                             const std::vector<Tap>& taps, double sampling_rate_hz);

// One-shot convenience: zero-pads around the frame, applies taps, rotates by
// the realization Doppler (t = 0 at the first sample) and adds calibrated
// complex white Gaussian noise unless snr_db is +inf.
std::vector<cplx> apply_channel(std::span<const cplx> frame_samples,
                                const ChannelRealization& realization,
                                double sampling_rate_hz, Rng& noise_rng);

// Per-frame channel evolution for one receiver.  Rover channels carry Rician
// LOS plus exponential-PDP NLOS taps with first-order Gauss-Markov gain
// evolution; base channels are LOS-only at a fixed position.  The eNodeB
// clock-bias walk is derived only from (seed, frame), so rover and base see
// the identical bias sequence.
class ChannelProcess {
 public:
  ChannelProcess(const ScenarioConfig& sc, bool base);

  ChannelRealization next();
  int64_t frame() const { return k_; }

 private:
  ScenarioConfig sc_;
  bool base_ = false;
  int64_t k_ = 0;
  double bias_s_ = 0.0;
  std::vector<double> excess_s_;   // NLOS excess delays, sorted
  std::vector<double> tap_power_;  // NLOS stationary powers
  std::vector<cplx> gains_;        // NLOS Gauss-Markov state
  double los_mag_ = 1.0;
};

// Pure form: replays the process from frame 0 (deterministic in
// (scenario.seed, frame_index)).
ChannelRealization realize_channel(const ScenarioConfig& sc, int64_t frame_index,
                                   bool base = false);

}  // namespace ltecir::sim
