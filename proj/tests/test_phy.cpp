#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ltecir/phy/grid.hpp"
#include "ltecir/phy/ofdm.hpp"
#include "ltecir/phy/reference_signals.hpp"

using namespace ltecir;
using namespace ltecir::phy;

TEST_CASE("make_grid_config: standard table") {
  const auto c10 = make_grid_config(10.0, 383);
  CHECK(c10.fft_size == 1024);
  CHECK(c10.used_subcarriers == 600);
  CHECK(c10.sampling_rate_hz == doctest::Approx(15.36e6));
  CHECK(c10.cp0 == 80);
  CHECK(c10.cp == 72);
  CHECK(c10.frame_samples() == 153600);

  const auto c14 = make_grid_config(1.4, 0);
  CHECK(c14.fft_size == 128);
  CHECK(c14.used_subcarriers == 72);
  CHECK(c14.frame_samples() == 19200);

  CHECK_THROWS(make_grid_config(2.0, 0));
  CHECK_THROWS(make_grid_config(10.0, 504));
  CHECK_THROWS(make_grid_config(10.0, -1));
}

TEST_CASE("slot timing adds up") {
  for (double bw : {1.4, 3.0, 5.0, 10.0, 15.0, 20.0}) {
    const auto c = make_grid_config(bw, 0);
    CHECK(c.slot_samples() * 2000 == static_cast<int>(c.sampling_rate_hz / 10.0) * 10);
    CHECK(c.symbol_offset(6) + c.cp + c.fft_size == c.slot_samples());
  }
}

TEST_CASE("pss: unit modulus, root arithmetic") {
  for (int nid2 = 0; nid2 < 3; ++nid2) {
    const auto p = generate_pss(nid2);
    REQUIRE(p.size() == 62);
    for (const auto& v : p) CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // 383 mod 3 == 386 mod 3 == 2 -> identical sequences.
  const auto a = generate_pss(383 % 3);
  const auto b = generate_pss(386 % 3);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  // Distinct roots decorrelate: |<p25, p29>| well below 62.
  const auto p0 = generate_pss(0), p1 = generate_pss(1);
  cplx acc = 0.0;
  for (size_t i = 0; i < 62; ++i) acc += p0[i] * std::conj(p1[i]);
  CHECK(std::abs(acc) < 15.0);
}

TEST_CASE("sss: subframe variants differ and separate cell groups") {
  const auto s0 = generate_sss(127, 2, false);
  const auto s5 = generate_sss(127, 2, true);
  REQUIRE(s0.size() == 62);
  bool any_diff = false;
  for (size_t i = 0; i < 62; ++i) {
    CHECK(std::abs(s0[i]) == doctest::Approx(1.0));
    if (std::abs(s0[i] - s5[i]) > 1e-12) any_diff = true;
  }
  CHECK(any_diff);

  // Cross-correlation between different nid1 stays low relative to 62.
  const auto sA = generate_sss(0, 2, false);
  const auto sB = generate_sss(1, 2, false);
  cplx acc = 0.0;
  for (size_t i = 0; i < 62; ++i) acc += sA[i] * std::conj(sB[i]);
  CHECK(std::abs(acc) < 62.0 * 0.5);
}

TEST_CASE("crs: unit modulus, comb positions, cell dependence") {
  const auto cfg = make_grid_config(10.0, 383);
  const auto r = generate_crs(cfg, 0, 0);
  REQUIRE(r.size() == static_cast<size_t>(cfg.used_subcarriers / 6));
  for (const auto& v : r) CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-12));

  const auto pos0 = crs_positions(cfg, 0);
  REQUIRE(pos0.size() == r.size());
  CHECK(pos0[0] == 383 % 6);
  for (size_t i = 1; i < pos0.size(); ++i) CHECK(pos0[i] - pos0[i - 1] == 6);
  CHECK(pos0.back() < cfg.used_subcarriers);

  // l=4 uses v=3: shifted comb.
  const auto pos4 = crs_positions(cfg, 4);
  CHECK(pos4[0] == (3 + 383) % 6);

  // Different cell -> different sequence somewhere.
  const auto cfg2 = make_grid_config(10.0, 384);
  const auto r2 = generate_crs(cfg2, 0, 0);
  bool diff = false;
  for (size_t i = 0; i < r.size(); ++i)
    if (std::abs(r[i] - r2[i]) > 1e-12) diff = true;
  CHECK(diff);

  // Different slot/symbol -> different sequence.
  const auto r_s1 = generate_crs(cfg, 1, 0);
  bool diff2 = false;
  for (size_t i = 0; i < r.size(); ++i)
    if (std::abs(r[i] - r_s1[i]) > 1e-12) diff2 = true;
  CHECK(diff2);
}

TEST_CASE("gold sequence: x1-only check") {
  // With c_init = 1 (x2 = x1 recurrence start state), c(n) is still a valid
  // binary sequence; sanity: values in {0,1} and not constant.
  const auto c = gold_sequence(1, 100);
  int ones = 0;
  for (int v : c) {
    CHECK((v == 0 || v == 1));
    ones += v;
  }
  CHECK(ones > 20);
  CHECK(ones < 80);
}

TEST_CASE("ofdm: zero grid, single tone, round trip") {
  const auto cfg = make_grid_config(1.4, 383);

  ResourceGrid zeros(cfg);
  const auto z = ofdm_modulate(zeros, cfg);
  REQUIRE(z.size() == static_cast<size_t>(cfg.frame_samples()));
  for (const auto& v : z) CHECK(std::abs(v) == 0.0);

  // Single unit subcarrier -> constant modulus within each symbol body.
  ResourceGrid tone(cfg);
  tone.symbols[0][10] = 1.0;
  const auto s = ofdm_modulate(tone, cfg);
  const double expect = 1.0 / cfg.fft_size;
  for (int i = 0; i < cfg.fft_size; ++i)
    CHECK(std::abs(s[static_cast<size_t>(cfg.cp0 + i)]) == doctest::Approx(expect).epsilon(1e-9));

  const auto frame = make_downlink_frame(cfg, 0, 99);
  const auto tx = ofdm_modulate(frame, cfg);
  const auto back = ofdm_demodulate(tx, 0, cfg);
  double max_err = 0.0, max_ref = 0.0;
  for (int sym = 0; sym < kSymbolsPerFrame; ++sym)
    for (int u = 0; u < cfg.used_subcarriers; ++u) {
      max_err = std::max(max_err, std::abs(back.symbols[sym][u] - frame.symbols[sym][u]));
      max_ref = std::max(max_ref, std::abs(frame.symbols[sym][u]));
    }
  CHECK(max_err / max_ref < 1e-10);

  CHECK_THROWS(ofdm_demodulate(std::span<const cplx>(tx.data(), tx.size() - 1), 0, cfg));
}

TEST_CASE("ofdm: sub-CP timing offset produces a linear phase ramp") {
  const auto cfg = make_grid_config(1.4, 17);
  const auto frame = make_downlink_frame(cfg, 0, 5);
  auto tx = ofdm_modulate(frame, cfg);
  // Append one more frame so a shifted start still has full coverage.
  const auto tx2 = ofdm_modulate(make_downlink_frame(cfg, 1, 5), cfg);
  tx.insert(tx.end(), tx2.begin(), tx2.end());

  const int shift = 3;
  // Starting 3 samples early leaves each FFT window inside the previous CP:
  // grid picks up exp(-j*2*pi*shift*k/N) on FFT bin k.
  std::vector<cplx> shifted(tx.begin(), tx.end());
  const auto early = ofdm_demodulate(shifted, static_cast<size_t>(cfg.frame_samples() - shift), cfg);
  const auto clean = ofdm_demodulate(shifted, static_cast<size_t>(cfg.frame_samples()), cfg);
  // Compare phase ramp between adjacent used rows on symbol 3.
  const int sym = 3;
  double ramp = 0.0;
  int count = 0;
  for (int u = 0; u < cfg.used_subcarriers - 1; ++u) {
    const cplx a = early.symbols[sym][u] / clean.symbols[sym][u];
    const cplx b = early.symbols[sym][u + 1] / clean.symbols[sym][u + 1];
    ramp += std::arg(b / a);
    ++count;
  }
  ramp /= count;
  CHECK(ramp == doctest::Approx(-kTwoPi * shift / cfg.fft_size).epsilon(1e-6));
}

TEST_CASE("parseval per symbol") {
  const auto cfg = make_grid_config(3.0, 100);
  const auto frame = make_downlink_frame(cfg, 2, 11);
  const auto tx = ofdm_modulate(frame, cfg);
  // Symbol 0 body occupies [cp0, cp0+fft).
  double e_time = 0.0;
  for (int i = 0; i < cfg.fft_size; ++i) e_time += std::norm(tx[static_cast<size_t>(cfg.cp0 + i)]);
  double e_freq = 0.0;
  for (int u = 0; u < cfg.used_subcarriers; ++u) e_freq += std::norm(frame.symbols[0][u]);
  // ifft scaled by 1/N: time energy = freq energy / N.
  CHECK(e_time == doctest::Approx(e_freq / cfg.fft_size).epsilon(1e-9));
}
