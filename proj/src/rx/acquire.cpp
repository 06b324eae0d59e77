#include "ltecir/rx/acquire.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltecir/dsp/fft.hpp"
#include "ltecir/phy/ofdm.hpp"
#include "ltecir/phy/reference_signals.hpp"

namespace ltecir::rx {

namespace {

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Time-domain replica of one PSS OFDM symbol body (no CP).
std::vector<cplx> pss_replica(const phy::GridConfig& cfg, int nid2) {
  const auto pss = phy::generate_pss(nid2);
  const auto pos = phy::sync_positions(cfg);
  std::vector<cplx> bins(static_cast<size_t>(cfg.fft_size), cplx(0.0));
  for (size_t i = 0; i < pos.size(); ++i)
    bins[static_cast<size_t>(cfg.bin_for_row(pos[i]))] = pss[i];
  return dsp::ifft_scaled(bins);
}

// Cross-correlation corr[n] = sum_i conj(rep[i]) * y[n+i] for n in
// [0, y.size() - rep.size()], via one zero-padded FFT pair.
std::vector<cplx> correlate(std::span<const cplx> y, const std::vector<cplx>& rep) {
  const size_t n_out = y.size() - rep.size() + 1;
  const size_t p = next_pow2(y.size() + rep.size());
  std::vector<cplx> a(p, cplx(0.0)), b(p, cplx(0.0));
  std::copy(y.begin(), y.end(), a.begin());
  std::copy(rep.begin(), rep.end(), b.begin());
  const auto A = dsp::fft(a);
  const auto B = dsp::fft(b);
  std::vector<cplx> prod(p);
  for (size_t i = 0; i < p; ++i) prod[i] = A[i] * std::conj(B[i]);
  auto full = dsp::ifft_scaled(prod);
  full.resize(n_out);
  return full;
}

}  // namespace

AcquisitionResult acquire(std::span<const cplx> samples, double bandwidth_mhz,
                          double peak_ratio_threshold) {
  const auto cfg = phy::make_grid_config(bandwidth_mhz, 0);
  const size_t F = static_cast<size_t>(cfg.frame_samples());
  const size_t N = static_cast<size_t>(cfg.fft_size);
  const size_t half = F / 2;
  if (samples.size() < 2 * F + N)
    throw std::runtime_error("acquire: need at least two frames of samples");

  // PSS search on the first two frames, combining three half-frame repeats.
  const std::span<const cplx> y = samples.subspan(0, 2 * F + N);
  int best_nid2 = 0;
  size_t best_n = 0;
  double best_metric = -1.0, best_ratio = 1.0;
  for (int nid2 = 0; nid2 < 3; ++nid2) {
    const auto rep = pss_replica(cfg, nid2);
    const auto corr = correlate(y, rep);
    std::vector<double> metric(half, 0.0);
    for (size_t n = 0; n < half; ++n)
      metric[n] = std::abs(corr[n]) + std::abs(corr[n + half]) + std::abs(corr[n + 2 * half]);

    size_t peak = 0;
    double pk = -1.0;
    for (size_t n = 0; n < half; ++n)
      if (metric[n] > pk) pk = metric[n], peak = n;
    // Second distinct peak: outside +-fft_size of the winner (circularly).
    double second = 0.0;
    for (size_t n = 0; n < half; ++n) {
      size_t d = (n > peak) ? n - peak : peak - n;
      d = std::min(d, half - d);
      if (d > N && metric[n] > second) second = metric[n];
    }
    const double ratio = second > 0.0 ? pk / second : pk;
    if (pk > best_metric) {
      best_metric = pk;
      best_nid2 = nid2;
      best_n = peak;
      best_ratio = ratio;
    }
  }

  if (best_ratio < peak_ratio_threshold)
    throw std::runtime_error("acquire: no synchronization peak (ratio " +
                             std::to_string(best_ratio) + " below threshold " +
                             std::to_string(peak_ratio_threshold) + ")");

  // Position of the PSS body within its half-frame (slot 0, symbol 6).
  const size_t pss_body = static_cast<size_t>(cfg.symbol_offset(6) + cfg.cp);
  // First PSS occurrence with a full SSS symbol before it.
  size_t p = best_n;
  while (p < N + static_cast<size_t>(cfg.cp)) p += half;

  // PSS-derived channel estimate on the 62 sync rows.
  const auto pos = phy::sync_positions(cfg);
  auto grid_rows = [&](size_t body_start) {
    std::vector<cplx> in(y.begin() + static_cast<long>(body_start),
                         y.begin() + static_cast<long>(body_start + N));
    const auto bins = dsp::fft(in);
    std::vector<cplx> rows(pos.size());
    for (size_t i = 0; i < pos.size(); ++i)
      rows[i] = bins[static_cast<size_t>(cfg.bin_for_row(pos[i]))];
    return rows;
  };
  const auto rx_pss = grid_rows(p);
  const auto rx_sss = grid_rows(p - N - static_cast<size_t>(cfg.cp));
  const auto pss_ref = phy::generate_pss(best_nid2);
  std::vector<cplx> chan(62);
  for (size_t i = 0; i < 62; ++i) chan[i] = rx_pss[i] * std::conj(pss_ref[i]);

  // Coherent SSS scores across 168 groups x {subframe 0, subframe 5}.
  int best_nid1 = 0;
  bool sf5 = false;
  double best_score = -1e300;
  for (int nid1 = 0; nid1 < 168; ++nid1) {
    for (const bool hyp5 : {false, true}) {
      const auto cand = phy::generate_sss(nid1, best_nid2, hyp5);
      cplx acc = 0.0;
      for (size_t i = 0; i < 62; ++i) acc += rx_sss[i] * std::conj(chan[i]) * std::conj(cand[i]);
      if (acc.real() > best_score) {
        best_score = acc.real();
        best_nid1 = nid1;
        sf5 = hyp5;
      }
    }
  }

  int64_t frame_start = static_cast<int64_t>(p) - static_cast<int64_t>(pss_body) -
                        (sf5 ? static_cast<int64_t>(half) : 0);
  while (frame_start < 0) frame_start += static_cast<int64_t>(F);

  AcquisitionResult out;
  out.cell_id = 3 * best_nid1 + best_nid2;
  out.coarse_frame_start = static_cast<size_t>(frame_start);
  out.correlation_peak_ratio = best_ratio;
  return out;
}

}  // namespace ltecir::rx
