#include "ltecir/sim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltecir/dsp/filter.hpp"
#include "ltecir/phy/grid.hpp"

namespace ltecir::sim {

namespace {
// Seed stream tags (keep stable: they define the reproducible realizations).
constexpr uint64_t kTagTapInit = 2;
constexpr uint64_t kTagClockWalk = 5;
constexpr uint64_t kTagTapFrame = 6;
}  // namespace

std::vector<cplx> apply_taps(std::span<const cplx> ext, size_t origin, size_t count,
                             const std::vector<Tap>& taps, double sampling_rate_hz) {
  constexpr int kTaps = 64, kCenter = 31;
  std::vector<cplx> y(count, cplx(0.0));
  for (const auto& tap : taps) {
    const double d = tap.delay_s * sampling_rate_hz;
    if (d < 0.0) throw std::invalid_argument("apply_taps: negative delay");
    const int64_t di = static_cast<int64_t>(std::floor(d));
    const double mu = d - static_cast<double>(di);
    const auto h = dsp::fractional_delay_kernel(mu, kTaps);
    // y[i] += gain * sum_m h[m] * ext[origin + i + kCenter - di - m]
    const int64_t base = static_cast<int64_t>(origin) + kCenter - di;
    if (base - (kTaps - 1) < 0)
      throw std::invalid_argument("apply_taps: insufficient history for delay " +
                                  std::to_string(tap.delay_s));
    if (base + static_cast<int64_t>(count) - 1 >= static_cast<int64_t>(ext.size()))
      throw std::invalid_argument("apply_taps: insufficient lookahead");
    for (size_t i = 0; i < count; ++i) {
      const cplx* x = ext.data() + base + static_cast<int64_t>(i) - (kTaps - 1);
      cplx acc = 0.0;
      for (int m = kTaps - 1; m >= 0; --m) acc += h[static_cast<size_t>(m)] * x[kTaps - 1 - m];
      y[i] += tap.gain * acc;
    }
  }
  return y;
}

std::vector<cplx> apply_channel(std::span<const cplx> frame_samples,
                                const ChannelRealization& realization,
                                double sampling_rate_hz, Rng& noise_rng) {
  double max_d = 0.0;
  for (const auto& t : realization.taps) max_d = std::max(max_d, t.delay_s);
  const size_t margin = static_cast<size_t>(std::ceil(max_d * sampling_rate_hz)) + 64;
  std::vector<cplx> ext(margin + frame_samples.size() + 64, cplx(0.0));
  std::copy(frame_samples.begin(), frame_samples.end(), ext.begin() + static_cast<long>(margin));
  auto y = apply_taps(ext, margin, frame_samples.size(), realization.taps, sampling_rate_hz);

  if (realization.doppler_hz != 0.0) {
    const double w = kTwoPi * realization.doppler_hz / sampling_rate_hz;
    for (size_t i = 0; i < y.size(); ++i) y[i] *= std::exp(cplx(0.0, w * static_cast<double>(i)));
  }

  if (std::isfinite(realization.snr_db)) {
    double p = 0.0;
    for (const auto& v : y) p += std::norm(v);
    p /= static_cast<double>(y.size());
    const double sigma = std::sqrt(p * std::pow(10.0, -realization.snr_db / 10.0));
    for (auto& v : y) v += sigma * noise_rng.cgaussian();
  }
  return y;
}

ChannelProcess::ChannelProcess(const ScenarioConfig& sc, bool base) : sc_(sc), base_(base) {
  sc_.validate();
  const double k_lin = std::pow(10.0, sc_.rician_k_db / 10.0);
  const int n_nlos = base_ ? 0 : sc_.n_taps - 1;
  los_mag_ = (n_nlos == 0) ? 1.0 : std::sqrt(k_lin / (k_lin + 1.0));

  if (n_nlos > 0) {
    Rng rng(derive_seed(sc_.seed, kTagTapInit));
    const double spread_s = sc_.delay_spread_ns * 1e-9;
    excess_s_.resize(static_cast<size_t>(n_nlos));
    for (auto& e : excess_s_) {
      double u = rng.uniform();
      if (u <= 0.0) u = 0.5;
      e = -spread_s * std::log(u);
    }
    std::sort(excess_s_.begin(), excess_s_.end());

    tap_power_.resize(excess_s_.size());
    double wsum = 0.0;
    for (size_t l = 0; l < excess_s_.size(); ++l) {
      tap_power_[l] = spread_s > 0.0 ? std::exp(-excess_s_[l] / spread_s) : 1.0;
      wsum += tap_power_[l];
    }
    const double nlos_total = 1.0 / (k_lin + 1.0);
    for (auto& p : tap_power_) p *= nlos_total / wsum;

    gains_.assign(excess_s_.size(), cplx(0.0));
  }
}

ChannelRealization ChannelProcess::next() {
  const int64_t k = k_++;
  const double t = static_cast<double>(k) * phy::kFrameDurationS;

  // eNodeB clock bias random walk (shared by all receivers of this scenario).
  if (k > 0 && sc_.clock_walk_ns_per_sqrt_s > 0.0) {
    Rng rng(derive_seed(sc_.seed, kTagClockWalk, static_cast<uint64_t>(k)));
    bias_s_ += sc_.clock_walk_ns_per_sqrt_s * 1e-9 * std::sqrt(phy::kFrameDurationS) *
               rng.gaussian();
  }

  Vec3 pos;
  double doppler = 0.0;
  if (base_) {
    pos = sc_.base_position;
  } else {
    pos = sc_.trajectory.position_at(t);
    const double h = 0.5 * phy::kFrameDurationS;
    const double r_m = dist(sc_.trajectory.position_at(t - h), sc_.enodeb_position);
    const double r_p = dist(sc_.trajectory.position_at(t + h), sc_.enodeb_position);
    const double rdot = (r_p - r_m) / (2.0 * h);
    doppler = -sc_.carrier_frequency_hz * rdot / kSpeedOfLight;
  }

  const double range = dist(pos, sc_.enodeb_position);
  const double tau0 = range / kSpeedOfLight + bias_s_;

  ChannelRealization out;
  out.doppler_hz = doppler;
  out.snr_db = sc_.snr_db;
  out.clock_bias_s = bias_s_;
  out.taps.push_back({tau0, los_mag_ * std::exp(cplx(0.0, -kTwoPi * sc_.carrier_frequency_hz * tau0))});

  if (!gains_.empty()) {
    Rng rng(derive_seed(sc_.seed, kTagTapFrame, static_cast<uint64_t>(k)));
    for (size_t l = 0; l < gains_.size(); ++l) {
      const cplx w = rng.cgaussian();
      const double sd = std::sqrt(tap_power_[l]);
      if (k == 0)
        gains_[l] = sd * w;
      else
        gains_[l] = sc_.tap_corr * gains_[l] +
                    std::sqrt(1.0 - sc_.tap_corr * sc_.tap_corr) * sd * w;
      out.taps.push_back({tau0 + excess_s_[l], gains_[l]});
    }
  }
  return out;
}

ChannelRealization realize_channel(const ScenarioConfig& sc, int64_t frame_index, bool base) {
  if (frame_index < 0 || frame_index >= sc.frames())
    throw std::out_of_range("realize_channel: frame beyond trajectory: " +
                            std::to_string(frame_index));
  ChannelProcess proc(sc, base);
  ChannelRealization r;
  for (int64_t k = 0; k <= frame_index; ++k) r = proc.next();
  return r;
}

}  // namespace ltecir::sim
