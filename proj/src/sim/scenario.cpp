#include "ltecir/sim/scenario.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ltecir/phy/grid.hpp"

namespace ltecir::sim {

using nlohmann::json;

void ScenarioConfig::validate() const {
  phy::make_grid_config(bandwidth_mhz, cell_id);  // throws on bad bw / cell
  if (carrier_frequency_hz <= 0.0) throw std::invalid_argument("carrier frequency must be positive");
  if (n_taps < 1) throw std::invalid_argument("n_taps must be >= 1");
  if (delay_spread_ns < 0.0) throw std::invalid_argument("delay spread must be >= 0");
  if (tap_corr < 0.0 || tap_corr >= 1.0) throw std::invalid_argument("tap_corr must be in [0,1)");
  if (clock_walk_ns_per_sqrt_s < 0.0) throw std::invalid_argument("clock walk intensity must be >= 0");
  if (frames() < 1) throw std::invalid_argument("trajectory too short for one frame");
}

std::string scenario_to_json(const ScenarioConfig& sc) {
  json j;
  j["bandwidth_mhz"] = sc.bandwidth_mhz;
  j["cell_id"] = sc.cell_id;
  j["carrier_frequency_hz"] = sc.carrier_frequency_hz;
  j["enodeb_position"] = sc.enodeb_position;
  j["base_position"] = sc.base_position;
  json wps = json::array();
  for (const auto& w : sc.trajectory.waypoints())
    wps.push_back({w.t, w.p[0], w.p[1], w.p[2]});
  j["trajectory"] = {{"waypoints", wps}};
  j["n_taps"] = sc.n_taps;
  j["delay_spread_ns"] = sc.delay_spread_ns;
  j["rician_k_db"] = sc.rician_k_db;
  j["tap_corr"] = sc.tap_corr;
  j["snr_db"] = sc.snr_db;
  j["clock_walk_ns_per_sqrt_s"] = sc.clock_walk_ns_per_sqrt_s;
  j["seed"] = sc.seed;
  return j.dump(2);
}

ScenarioConfig scenario_from_json(const std::string& text) {
  const json j = json::parse(text);
  ScenarioConfig sc;
  sc.bandwidth_mhz = j.value("bandwidth_mhz", sc.bandwidth_mhz);
  sc.cell_id = j.value("cell_id", sc.cell_id);
  sc.carrier_frequency_hz = j.value("carrier_frequency_hz", sc.carrier_frequency_hz);
  if (j.contains("enodeb_position")) sc.enodeb_position = j.at("enodeb_position").get<Vec3>();
  if (j.contains("base_position")) sc.base_position = j.at("base_position").get<Vec3>();
  if (j.contains("trajectory")) {
    const auto& tj = j.at("trajectory");
    if (tj.contains("rectangle")) {
      const auto& r = tj.at("rectangle");
      sc.trajectory = rectangle_trajectory(r.at("origin").get<Vec3>(), r.at("width").get<double>(),
                                           r.at("height").get<double>(),
                                           r.at("duration_s").get<double>());
    } else {
      std::vector<Waypoint> wps;
      for (const auto& w : tj.at("waypoints")) {
        if (w.size() != 4) throw std::invalid_argument("waypoint must be [t, x, y, z]");
        wps.push_back({w[0].get<double>(),
                       {w[1].get<double>(), w[2].get<double>(), w[3].get<double>()}});
      }
      sc.trajectory = Trajectory(std::move(wps));
    }
  }
  sc.n_taps = j.value("n_taps", sc.n_taps);
  sc.delay_spread_ns = j.value("delay_spread_ns", sc.delay_spread_ns);
  sc.rician_k_db = j.value("rician_k_db", sc.rician_k_db);
  sc.tap_corr = j.value("tap_corr", sc.tap_corr);
  sc.snr_db = j.value("snr_db", sc.snr_db);
  sc.clock_walk_ns_per_sqrt_s = j.value("clock_walk_ns_per_sqrt_s", sc.clock_walk_ns_per_sqrt_s);
  sc.seed = j.value("seed", sc.seed);
  sc.validate();
  return sc;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario config: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return scenario_from_json(text);
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid scenario config " + path.string() + ": " + e.what());
  }
}

}  // namespace ltecir::sim
