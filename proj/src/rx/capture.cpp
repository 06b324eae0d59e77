#include "ltecir/rx/capture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "ltecir/dsp/fft.hpp"
#include "ltecir/io/csv.hpp"
#include "ltecir/io/iq.hpp"
#include "ltecir/rx/acquire.hpp"
#include "ltecir/rx/cfr.hpp"
#include "ltecir/rx/cir.hpp"
#include "ltecir/rx/esprit.hpp"
#include "ltecir/rx/pll.hpp"

namespace ltecir::rx {

namespace {

double bandwidth_from_rate(double fs) {
  for (const double bw : {1.4, 3.0, 5.0, 10.0, 15.0, 20.0})
    if (std::abs(phy::make_grid_config(bw, 0).sampling_rate_hz - fs) < 1.0) return bw;
  throw std::runtime_error("unsupported sampling rate: " + std::to_string(fs));
}

// Streaming view over the IQ file keeping only the samples still needed.
class SampleStream {
 public:
  explicit SampleStream(io::IqReader& rd) : rd_(rd) {}

  // Guarantees [abs0, abs_end) is resident; returns false at EOF.
  bool ensure(size_t abs_end) {
    while (abs0_ + buf_.size() < abs_end) {
      auto chunk = rd_.read(1 << 16);
      if (chunk.empty()) return false;
      buf_.insert(buf_.end(), chunk.begin(), chunk.end());
    }
    return true;
  }
  void drop_before(size_t abs) {
    if (abs <= abs0_) return;
    const size_t n = std::min(buf_.size(), abs - abs0_);
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(n));
    abs0_ += n;
  }
  const cplx* at(size_t abs) const { return buf_.data() + (abs - abs0_); }

 private:
  io::IqReader& rd_;
  std::vector<cplx> buf_;
  size_t abs0_ = 0;
};

struct FrameCfrs {
  std::vector<CfrEstimate> all;     // 40 CRS symbols
  std::vector<double> t_sym;        // body-center time within the frame, s
  CfrEstimate avg_l0;               // Doppler-derotated average over l=0 symbols
};

// Integrated prompt over all CRS symbols, compensated for the current delay
// and Doppler estimates.
cplx prompt_sum(const FrameCfrs& f, double rel_delay_s, double doppler_hz) {
  cplx u = 0.0;
  for (size_t s = 0; s < f.all.size(); ++s) {
    const auto& c = f.all[s];
    cplx acc = 0.0;
    for (size_t i = 0; i < c.values.size(); ++i) {
      const double fr = c.first_freq_hz + static_cast<double>(i) * c.comb_spacing_hz;
      acc += c.values[i] * std::exp(cplx(0.0, kTwoPi * fr * rel_delay_s));
    }
    u += acc * std::exp(cplx(0.0, -kTwoPi * doppler_hz * f.t_sym[s]));
  }
  return u;
}

}  // namespace

CaptureResult process_capture(const std::filesystem::path& iq_path, const ReceiverConfig& rc,
                              const std::filesystem::path& truth_csv) {
  io::IqReader rd(iq_path);
  const auto& meta = rd.meta();
  const double bw = bandwidth_from_rate(meta.sampling_rate_hz);

  // Acquisition on the leading two frames.
  const auto cfg0 = phy::make_grid_config(bw, 0);
  const size_t F = static_cast<size_t>(cfg0.frame_samples());
  const size_t N = static_cast<size_t>(cfg0.fft_size);
  SampleStream stream(rd);
  if (!stream.ensure(2 * F + N))
    throw std::runtime_error("capture too short for acquisition: " + iq_path.string());
  AcquisitionResult acq =
      acquire(std::span<const cplx>(stream.at(0), 2 * F + N), bw, rc.acq_threshold);

  CaptureResult out;
  out.acq = acq;
  out.cfg = phy::make_grid_config(bw, acq.cell_id);
  out.carrier_hz = meta.carrier_frequency_hz;
  const auto& cfg = out.cfg;
  const double ts = cfg.sample_period_s();
  const double fs = cfg.sampling_rate_hz;
  const size_t n0 = acq.coarse_frame_start;
  const size_t total = rd.total_samples();
  const size_t n_frames = total > n0 ? (total - n0) / F : 0;
  if (n_frames == 0) throw std::runtime_error("no full frame after acquisition offset");

  // Optional truth labels, keyed by frame index.
  std::map<int64_t, double> labels;
  if (!truth_csv.empty()) {
    const auto t = io::read_csv(truth_csv);
    const int fc = t.col("frame"), rc_col = t.col("true_range_m");
    if (fc < 0 || rc_col < 0)
      throw std::runtime_error("truth table missing frame/true_range_m: " + truth_csv.string());
    for (const auto& row : t.rows)
      labels[static_cast<int64_t>(row[static_cast<size_t>(fc)])] = row[static_cast<size_t>(rc_col)];
  }

  const LoopConfig loop{rc.loop_bandwidth_hz, rc.damping, phy::kFrameDurationS};
  TrackingState st;
  std::vector<cplx> body(N);

  for (size_t k = 0; k < n_frames; ++k) {
    const size_t w = n0 + k * F;
    if (!stream.ensure(w + F)) break;

    FrameCfrs fc;
    for (int ns = 0; ns < phy::kSlotsPerFrame; ++ns) {
      for (const int l : {0, 4}) {
        const size_t body_abs = w + static_cast<size_t>(ns * cfg.slot_samples() +
                                                        cfg.symbol_offset(l) + cfg.cp_len(l));
        std::copy(stream.at(body_abs), stream.at(body_abs) + N, body.begin());
        const auto bins = dsp::fft(body);
        std::vector<cplx> row(static_cast<size_t>(cfg.used_subcarriers));
        for (int u = 0; u < cfg.used_subcarriers; ++u)
          row[static_cast<size_t>(u)] = bins[static_cast<size_t>(cfg.bin_for_row(u))];
        fc.all.push_back(estimate_cfr(row, cfg, ns * phy::kSymbolsPerSlot + l));
        fc.t_sym.push_back((ns * cfg.slot_samples() + cfg.symbol_offset(l) + cfg.cp_len(l) +
                            cfg.fft_size / 2) *
                           ts);
      }
    }

    if (k == 0) {
      // Coarse Doppler across half a frame (unambiguous to +-100 Hz).
      const double dt = 10.0 * cfg.slot_samples() * ts;
      st.doppler_hz = coarse_doppler(fc.all[0], fc.all[20], dt);
      st.integrator_rad_s = kTwoPi * st.doppler_hz;
      st.v_pll_rad_s = st.integrator_rad_s;
    }

    // Doppler-derotated average over the l=0 comb (common grid).
    fc.avg_l0 = fc.all[0];
    for (auto& v : fc.avg_l0.values) v = 0.0;
    for (size_t s = 0; s < fc.all.size(); s += 2) {
      const cplx rot = std::exp(cplx(0.0, -kTwoPi * st.doppler_hz * fc.t_sym[s]));
      for (size_t i = 0; i < fc.avg_l0.values.size(); ++i)
        fc.avg_l0.values[i] += fc.all[s].values[i] * rot;
    }
    for (auto& v : fc.avg_l0.values) v /= static_cast<double>(phy::kSlotsPerFrame);

    const int subarray = static_cast<int>(fc.avg_l0.values.size()) / 2;
    const int order = esprit_model_order(fc.avg_l0, rc.eig_ratio_threshold,
                                         std::min(rc.max_model_order, subarray - 1));
    const auto delays = esprit_delays(fc.avg_l0, order);
    out.esprit_delay_s.push_back(delays.front());

    if (k == 0) {
      st.toa_samples = static_cast<double>(n0) + delays.front() * fs;
      const cplx u0 = prompt_sum(fc, (st.toa_samples - static_cast<double>(n0)) * ts,
                                 st.doppler_hz);
      // Predicted phase at the next frame start, matching pll_update's advance.
      st.carrier_phase_rad = std::arg(u0) + loop.update_period_s * st.v_pll_rad_s;
      st.lock = true;
    } else {
      const double rel = (st.toa_samples - static_cast<double>(n0)) * ts;
      const cplx u = prompt_sum(fc, rel, st.doppler_hz);
      st = pll_update(st, u, loop);
      st.toa_samples += eq1_delta_samples(st.v_pll_rad_s, rc.eq1_scale, phy::kFrameDurationS, ts,
                                          out.carrier_hz);
    }

    CirSample cs;
    cs.frame_index = static_cast<int64_t>(k);
    cs.toa_samples = st.toa_samples;
    cs.magnitudes = extract_cir(fc.avg_l0, rc.n_cir,
                                (st.toa_samples - static_cast<double>(n0)) * ts, rc.align);
    const auto it = labels.find(static_cast<int64_t>(k));
    cs.true_range_m = it != labels.end() ? it->second : std::numeric_limits<double>::quiet_NaN();
    out.samples.push_back(std::move(cs));
    out.log.push_back({static_cast<int64_t>(k), st.toa_samples, st.doppler_hz, st.lock});

    stream.drop_before(w + F);
  }
  return out;
}

std::vector<double> remove_clock_bias(const std::vector<TrackingLogRow>& rover_log,
                                      const std::vector<TrackingLogRow>& base_log,
                                      double base_known_range_m, double sample_period_s) {
  const size_t n = std::min(rover_log.size(), base_log.size());
  if (rover_log.size() != base_log.size()) {
    const auto& longer = rover_log.size() > base_log.size() ? rover_log : base_log;
    throw std::runtime_error("clock-bias removal: no matching frame " +
                             std::to_string(longer[n].frame));
  }
  const double base_samples = base_known_range_m / (kSpeedOfLight * sample_period_s);
  std::vector<double> ranges(n);
  for (size_t i = 0; i < n; ++i) {
    if (rover_log[i].frame != base_log[i].frame)
      throw std::runtime_error("clock-bias removal: frame mismatch at " +
                               std::to_string(rover_log[i].frame));
    const double bias_samples = base_log[i].toa_samples - base_samples;
    ranges[i] = (rover_log[i].toa_samples - bias_samples) * sample_period_s * kSpeedOfLight;
  }
  return ranges;
}

void write_cir_csv(const std::vector<CirSample>& samples, const std::filesystem::path& path) {
  if (samples.empty()) throw std::invalid_argument("write_cir_csv: no samples");
  std::vector<std::string> header = {"frame", "true_range_m"};
  for (size_t i = 0; i < samples[0].magnitudes.size(); ++i)
    header.push_back("mag_" + std::to_string(i));
  io::CsvWriter w(path, header);
  std::vector<double> row;
  for (const auto& s : samples) {
    row.clear();
    row.push_back(static_cast<double>(s.frame_index));
    row.push_back(s.true_range_m);
    row.insert(row.end(), s.magnitudes.begin(), s.magnitudes.end());
    w.row(row);
  }
  w.close();
}

void write_tracking_csv(const std::vector<TrackingLogRow>& log,
                        const std::filesystem::path& path) {
  io::CsvWriter w(path, {"frame", "toa_samples", "doppler_hz", "lock"});
  for (const auto& r : log)
    w.row({static_cast<double>(r.frame), r.toa_samples, r.doppler_hz, r.lock ? 1.0 : 0.0});
  w.close();
}

std::vector<TrackingLogRow> read_tracking_csv(const std::filesystem::path& path) {
  const auto t = io::read_csv(path);
  const int f = t.col("frame"), toa = t.col("toa_samples"), d = t.col("doppler_hz"),
            lk = t.col("lock");
  if (f < 0 || toa < 0 || d < 0 || lk < 0)
    throw std::runtime_error("bad tracking log: " + path.string());
  std::vector<TrackingLogRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& r : t.rows)
    rows.push_back({static_cast<int64_t>(r[static_cast<size_t>(f)]), r[static_cast<size_t>(toa)],
                    r[static_cast<size_t>(d)], r[static_cast<size_t>(lk)] != 0.0});
  return rows;
}

}  // namespace ltecir::rx
