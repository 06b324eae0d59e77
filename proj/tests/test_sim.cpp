#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ltecir/io/csv.hpp"
#include "ltecir/io/iq.hpp"
#include "ltecir/phy/grid.hpp"
#include "ltecir/phy/ofdm.hpp"
#include "ltecir/sim/channel.hpp"
#include "ltecir/sim/dataset.hpp"
#include "ltecir/sim/scenario.hpp"

using namespace ltecir;
using namespace ltecir::sim;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig sc;
  sc.bandwidth_mhz = 1.4;
  sc.trajectory = rectangle_trajectory({0.0, 0.0, 1.5}, 3.45, 2.0, 0.5);
  sc.seed = 42;
  return sc;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ltecir_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("trajectory: interpolation and rectangle") {
  const auto traj = rectangle_trajectory({0.0, 0.0, 1.5}, 34.5, 20.0, 50.0);
  CHECK(traj.path_length() == doctest::Approx(109.0));
  CHECK(traj.duration() == doctest::Approx(50.0));
  const auto p0 = traj.position_at(0.0);
  CHECK(p0[0] == doctest::Approx(0.0));
  // Halfway through the first leg (34.5 m at 2.18 m/s).
  const auto pm = traj.position_at(34.5 / 2.18 / 2.0);
  CHECK(pm[0] == doctest::Approx(17.25).epsilon(1e-9));
  CHECK(pm[1] == doctest::Approx(0.0));
  // Clamped past the end.
  const auto pe = traj.position_at(100.0);
  CHECK(pe[0] == doctest::Approx(0.0));
  CHECK(traj.max_speed() == doctest::Approx(2.18));

  CHECK_THROWS(Trajectory({{0.0, {0, 0, 0}}, {0.0, {1, 0, 0}}}));
  CHECK_THROWS(Trajectory({{0.0, {0, 0, 0}}, {1.0, {0, 0, 0}}}));
}

TEST_CASE("scenario json round trip") {
  auto sc = small_scenario();
  sc.snr_db = 7.5;
  sc.n_taps = 5;
  const auto text = scenario_to_json(sc);
  const auto back = scenario_from_json(text);
  CHECK(back.bandwidth_mhz == sc.bandwidth_mhz);
  CHECK(back.cell_id == sc.cell_id);
  CHECK(back.snr_db == 7.5);
  CHECK(back.n_taps == 5);
  CHECK(back.seed == sc.seed);
  CHECK(back.trajectory.path_length() == doctest::Approx(sc.trajectory.path_length()));
  CHECK(back.frames() == sc.frames());

  CHECK_THROWS(scenario_from_json("{\"bandwidth_mhz\": 2.0}"));
}

TEST_CASE("realize_channel: degenerate Rician, determinism, clock walk off") {
  auto sc = small_scenario();
  sc.n_taps = 1;
  sc.clock_walk_ns_per_sqrt_s = 0.0;
  const auto r = realize_channel(sc, 3);
  REQUIRE(r.taps.size() == 1);
  const double range = dist(sc.trajectory.position_at(0.03), sc.enodeb_position);
  CHECK(r.taps[0].delay_s == doctest::Approx(range / kSpeedOfLight).epsilon(1e-12));
  CHECK(std::abs(r.taps[0].gain) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.clock_bias_s == 0.0);

  const auto r2 = realize_channel(sc, 3);
  CHECK(r2.taps[0].delay_s == r.taps[0].delay_s);
  CHECK(r2.taps[0].gain == r.taps[0].gain);

  CHECK_THROWS(realize_channel(sc, sc.frames()));
}

TEST_CASE("realize_channel: geometric consistency with multipath and clock bias") {
  auto sc = small_scenario();
  sc.clock_walk_ns_per_sqrt_s = 5.0;
  for (const int k : {0, 7, 20}) {
    const auto r = realize_channel(sc, k);
    REQUIRE(r.taps.size() == static_cast<size_t>(sc.n_taps));
    const double t = k * 0.01;
    const double range = dist(sc.trajectory.position_at(t), sc.enodeb_position);
    CHECK(std::abs(r.taps[0].delay_s * kSpeedOfLight - r.clock_bias_s * kSpeedOfLight - range) <
          1e-6);
    for (size_t l = 1; l < r.taps.size(); ++l) CHECK(r.taps[l].delay_s > r.taps[l - 1].delay_s - 1e-15);
  }
  // Bias actually moves when the walk is on.
  CHECK(realize_channel(sc, 20).clock_bias_s != 0.0);
}

TEST_CASE("realize_channel: doppler sign matches geometry") {
  auto sc = small_scenario();
  // First leg moves +x, toward the eNodeB at (280,160,35): range shrinks.
  const auto r = realize_channel(sc, 1);
  CHECK(r.doppler_hz > 0.0);
}

TEST_CASE("apply_channel: identity tap") {
  auto cfg = phy::make_grid_config(1.4, 383);
  const auto frame = phy::ofdm_modulate(phy::make_downlink_frame(cfg, 0, 1), cfg);
  ChannelRealization r;
  r.taps = {{0.0, cplx(1.0, 0.0)}};
  r.snr_db = std::numeric_limits<double>::infinity();
  Rng rng(1);
  const auto y = apply_channel(frame, r, cfg.sampling_rate_hz, rng);
  REQUIRE(y.size() == frame.size());
  double max_dev = 0.0;
  for (size_t i = 0; i < y.size(); ++i) max_dev = std::max(max_dev, std::abs(y[i] - frame[i]));
  CHECK(max_dev < 1e-6);
}

TEST_CASE("apply_channel: integer delay shifts") {
  auto cfg = phy::make_grid_config(1.4, 383);
  const auto frame = phy::ofdm_modulate(phy::make_downlink_frame(cfg, 0, 2), cfg);
  const int d = 11;
  ChannelRealization r;
  r.taps = {{d / cfg.sampling_rate_hz, cplx(1.0, 0.0)}};
  r.snr_db = std::numeric_limits<double>::infinity();
  Rng rng(1);
  const auto y = apply_channel(frame, r, cfg.sampling_rate_hz, rng);
  double max_dev = 0.0;
  for (size_t i = d; i < y.size(); ++i)
    max_dev = std::max(max_dev, std::abs(y[i] - frame[i - d]));
  CHECK(max_dev < 1e-6);
}

TEST_CASE("apply_channel: snr calibration at 0 dB") {
  Rng src(9);
  std::vector<cplx> x(120000);
  for (auto& v : x) v = src.cgaussian();
  ChannelRealization r;
  r.taps = {{0.0, cplx(1.0, 0.0)}};
  r.snr_db = 0.0;
  Rng rng(77);
  const auto y = apply_channel(x, r, 1.92e6, rng);
  double ps = 0.0, pn = 0.0;
  for (size_t i = 100; i + 100 < x.size(); ++i) {
    ps += std::norm(x[i]);
    pn += std::norm(y[i] - x[i]);
  }
  const double snr_db = 10.0 * std::log10(ps / pn);
  CHECK(std::abs(snr_db - 0.0) < 0.3);
}

TEST_CASE("apply_channel: energy with resolvable unit taps") {
  auto cfg = phy::make_grid_config(1.4, 383);
  const auto frame = phy::ofdm_modulate(phy::make_downlink_frame(cfg, 0, 3), cfg);
  const double fs = cfg.sampling_rate_hz;
  // Delays at multiples of 16 samples: signal autocorrelation vanishes there
  // for the 72/128 used-bin layout, so powers add.
  ChannelRealization r;
  r.taps = {{0.0, std::polar(1.0, 0.3)}, {16.0 / fs, std::polar(1.0, 2.1)},
            {32.0 / fs, std::polar(1.0, -1.2)}};
  r.snr_db = std::numeric_limits<double>::infinity();
  Rng rng(1);
  const auto y = apply_channel(frame, r, fs, rng);
  double pin = 0.0, pout = 0.0;
  for (const auto& v : frame) pin += std::norm(v);
  for (const auto& v : y) pout += std::norm(v);
  CHECK(pout / (3.0 * pin) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("iq file round trip") {
  const auto dir = temp_dir("iq");
  io::IqMeta meta{1.92e6, 2.145e9, 0.0, 383};
  Rng rng(5);
  std::vector<cplx> x(1000);
  for (auto& v : x) v = rng.cgaussian();
  {
    io::IqWriter w(dir / "a.iq", meta);
    w.write(std::span<const cplx>(x.data(), 400));
    w.write(std::span<const cplx>(x.data() + 400, 600));
  }
  io::IqReader rd(dir / "a.iq");
  CHECK(rd.meta().sampling_rate_hz == 1.92e6);
  CHECK(rd.meta().carrier_frequency_hz == 2.145e9);
  CHECK(rd.meta().cell_id == 383);
  CHECK(rd.total_samples() == 1000);
  const auto back = rd.read_all();
  REQUIRE(back.size() == 1000);
  for (size_t i = 0; i < 1000; ++i)
    CHECK(std::abs(back[i] - x[i]) < 1e-6);  // float32 quantization
}

TEST_CASE("csv round trip") {
  const auto dir = temp_dir("csv");
  {
    io::CsvWriter w(dir / "t.csv", {"a", "b"});
    w.row({1.0, 2.5});
    w.row({-3.0, 1e-17});
    w.close();
  }
  const auto t = io::read_csv(dir / "t.csv");
  CHECK(t.col("a") == 0);
  CHECK(t.col("b") == 1);
  CHECK(t.col("missing") == -1);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == 2.5);
  CHECK(t.rows[1][1] == 1e-17);
}

TEST_CASE("generate_dataset: frame counts, continuity, determinism") {
  auto sc = small_scenario();
  const auto dir1 = temp_dir("ds1");
  const auto paths = generate_dataset(sc, dir1);
  CHECK(paths.frames == 50);

  const auto truth = io::read_csv(paths.truth);
  REQUIRE(truth.rows.size() == 50);
  const int rc = truth.col("true_range_m");
  const double vmax = sc.trajectory.max_speed();
  for (size_t k = 1; k < truth.rows.size(); ++k)
    CHECK(std::abs(truth.rows[k][rc] - truth.rows[k - 1][rc]) <= vmax * 0.01 + 1e-9);

  const auto tb = io::read_csv(paths.truth_base);
  for (const auto& row : tb.rows) CHECK(row[rc] == doctest::Approx(tb.rows[0][rc]).epsilon(1e-12));

  io::IqReader rd(paths.rover_iq);
  const auto cfg = phy::make_grid_config(sc.bandwidth_mhz, sc.cell_id);
  CHECK(rd.total_samples() ==
        static_cast<size_t>(50 * cfg.frame_samples() + cfg.slot_samples()));

  // Bit-identical rerun.
  const auto dir2 = temp_dir("ds2");
  const auto paths2 = generate_dataset(sc, dir2);
  CHECK(slurp(paths.rover_iq) == slurp(paths2.rover_iq));
  CHECK(slurp(paths.base_iq) == slurp(paths2.base_iq));
  CHECK(slurp(paths.truth) == slurp(paths2.truth));

  // Different seed changes the IQ bytes.
  auto sc3 = sc;
  sc3.seed = 43;
  const auto dir3 = temp_dir("ds3");
  const auto paths3 = generate_dataset(sc3, dir3);
  CHECK(slurp(paths.rover_iq) != slurp(paths3.rover_iq));
}
