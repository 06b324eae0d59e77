#include "ltecir/sim/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include "ltecir/io/csv.hpp"
#include "ltecir/io/iq.hpp"
#include "ltecir/phy/grid.hpp"
#include "ltecir/phy/ofdm.hpp"
#include "ltecir/sim/channel.hpp"

namespace ltecir::sim {

namespace {
constexpr uint64_t kTagPayload = 1;
constexpr uint64_t kTagRoverNoise = 3;
constexpr uint64_t kTagBaseNoise = 4;

// Frame filtered with streaming context: margin samples of history from the
// previous frame (zeros before frame 0) and 64 samples of lookahead from the
// next frame.
std::vector<cplx> filter_frame(const std::vector<cplx>& prev, const std::vector<cplx>& cur,
                               const std::vector<cplx>& next, size_t count, size_t margin,
                               const ChannelRealization& r, double fs, Rng& noise_rng) {
  std::vector<cplx> ext(margin + count + 64, cplx(0.0));
  if (!prev.empty()) {
    const size_t take = std::min(margin, prev.size());
    std::copy(prev.end() - static_cast<long>(take), prev.end(),
              ext.begin() + static_cast<long>(margin - take));
  }
  std::copy(cur.begin(), cur.begin() + static_cast<long>(count),
            ext.begin() + static_cast<long>(margin));
  if (count < cur.size()) {
    const size_t take = std::min<size_t>(64, cur.size() - count);
    std::copy(cur.begin() + static_cast<long>(count),
              cur.begin() + static_cast<long>(count + take),
              ext.begin() + static_cast<long>(margin + count));
  } else if (!next.empty()) {
    std::copy(next.begin(), next.begin() + 64, ext.begin() + static_cast<long>(margin + count));
  }

  auto y = apply_taps(ext, margin, count, r.taps, fs);
  if (r.doppler_hz != 0.0) {
    const double w = kTwoPi * r.doppler_hz / fs;
    for (size_t i = 0; i < y.size(); ++i) y[i] *= std::exp(cplx(0.0, w * static_cast<double>(i)));
  }
  if (std::isfinite(r.snr_db)) {
    double p = 0.0;
    for (const auto& v : y) p += std::norm(v);
    p /= static_cast<double>(y.size());
    const double sigma = std::sqrt(p * std::pow(10.0, -r.snr_db / 10.0));
    for (auto& v : y) v += sigma * noise_rng.cgaussian();
  }
  return y;
}
}  // namespace

DatasetPaths generate_dataset(const ScenarioConfig& sc, const std::filesystem::path& out_dir) {
  sc.validate();
  std::filesystem::create_directories(out_dir);
  const auto cfg = phy::make_grid_config(sc.bandwidth_mhz, sc.cell_id);
  const double fs = cfg.sampling_rate_hz;
  const size_t F = static_cast<size_t>(cfg.frame_samples());
  const int N = sc.frames();
  const uint64_t payload_seed = derive_seed(sc.seed, kTagPayload);

  DatasetPaths paths;
  paths.rover_iq = out_dir / "rover.iq";
  paths.base_iq = out_dir / "base.iq";
  paths.truth = out_dir / "truth.csv";
  paths.truth_base = out_dir / "truth_base.csv";
  paths.frames = N;

  io::IqMeta meta;
  meta.sampling_rate_hz = fs;
  meta.carrier_frequency_hz = sc.carrier_frequency_hz;
  meta.start_time = 0.0;
  meta.cell_id = sc.cell_id;
  io::IqWriter rover(paths.rover_iq, meta);
  io::IqWriter base(paths.base_iq, meta);
  const std::vector<std::string> truth_header = {"frame", "time_s", "true_range_m",
                                                 "clock_bias_s", "doppler_hz"};
  io::CsvWriter truth(paths.truth, truth_header);
  io::CsvWriter truth_base(paths.truth_base, truth_header);

  ChannelProcess proc_rover(sc, false);
  ChannelProcess proc_base(sc, true);

  const size_t margin = 512;
  auto tx = [&](int k) {
    return phy::ofdm_modulate(phy::make_downlink_frame(cfg, static_cast<uint64_t>(k), payload_seed), cfg);
  };

  std::vector<cplx> prev, cur = tx(0), next;
  for (int k = 0; k < N; ++k) {
    next = tx(k + 1);
    const auto rr = proc_rover.next();
    const auto rb = proc_base.next();

    Rng rn(derive_seed(sc.seed, kTagRoverNoise, static_cast<uint64_t>(k)));
    Rng bn(derive_seed(sc.seed, kTagBaseNoise, static_cast<uint64_t>(k)));
    rover.write(filter_frame(prev, cur, next, F, margin, rr, fs, rn));
    base.write(filter_frame(prev, cur, next, F, margin, rb, fs, bn));

    const double t = static_cast<double>(k) * phy::kFrameDurationS;
    const double range_r = rr.taps[0].delay_s * kSpeedOfLight - rr.clock_bias_s * kSpeedOfLight;
    const double range_b = rb.taps[0].delay_s * kSpeedOfLight - rb.clock_bias_s * kSpeedOfLight;
    truth.row({static_cast<double>(k), t, range_r, rr.clock_bias_s, rr.doppler_hz});
    truth_base.row({static_cast<double>(k), t, range_b, rb.clock_bias_s, rb.doppler_hz});

    prev = std::move(cur);
    cur = std::move(next);
  }

  // One-slot tail pad, continuing the stream through the frame-N channel.
  {
    const size_t pad = static_cast<size_t>(cfg.slot_samples());
    const auto rr = proc_rover.next();
    const auto rb = proc_base.next();
    Rng rn(derive_seed(sc.seed, kTagRoverNoise, static_cast<uint64_t>(N)));
    Rng bn(derive_seed(sc.seed, kTagBaseNoise, static_cast<uint64_t>(N)));
    rover.write(filter_frame(prev, cur, {}, pad, margin, rr, fs, rn));
    base.write(filter_frame(prev, cur, {}, pad, margin, rb, fs, bn));
  }

  rover.close();
  base.close();
  truth.close();
  truth_base.close();
  return paths;
}

}  // namespace ltecir::sim
