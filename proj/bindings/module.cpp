// Python bindings for the main operations: synthesis, the software receiver,
// CIR quantization, and ranging metrics.  Heavy lifting stays in ltecir_core;
// this layer only converts to and from Python containers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ltecir/eval/metrics.hpp"
#include "ltecir/phy/grid.hpp"
#include "ltecir/ranging/quantize.hpp"
#include "ltecir/rx/capture.hpp"
#include "ltecir/sim/dataset.hpp"
#include "ltecir/sim/scenario.hpp"

namespace py = pybind11;
using namespace ltecir;

namespace {

py::dict grid_config_dict(double bandwidth_mhz) {
  const phy::GridConfig g = phy::make_grid_config(bandwidth_mhz, 0);
  py::dict d;
  d["bandwidth_mhz"] = g.bandwidth_mhz;
  d["fft_size"] = g.fft_size;
  d["used_subcarriers"] = g.used_subcarriers;
  d["sampling_rate_hz"] = g.sampling_rate_hz;
  d["cp0"] = g.cp0;
  d["cp"] = g.cp;
  d["frame_samples"] = g.frame_samples();
  return d;
}

py::dict simulate(const std::string& scenario_json, uint64_t seed, const std::string& out_dir) {
  sim::ScenarioConfig sc = sim::scenario_from_json(scenario_json);
  sc.seed = seed;
  sc.validate();
  const sim::DatasetPaths paths = sim::generate_dataset(sc, out_dir);
  py::dict d;
  d["rover_iq"] = paths.rover_iq.string();
  d["base_iq"] = paths.base_iq.string();
  d["truth"] = paths.truth.string();
  d["truth_base"] = paths.truth_base.string();
  d["frames"] = paths.frames;
  return d;
}

py::dict receive(const std::string& iq_path, const std::string& truth_csv, int n_cir) {
  rx::ReceiverConfig rc;
  rc.n_cir = n_cir;
  const rx::CaptureResult cap =
      rx::process_capture(iq_path, rc, std::filesystem::path(truth_csv));
  py::dict d;
  d["cell_id"] = cap.acq.cell_id;
  d["correlation_peak_ratio"] = cap.acq.correlation_peak_ratio;
  d["sampling_rate_hz"] = cap.cfg.sampling_rate_hz;
  d["n_frames"] = cap.samples.size();
  size_t locked = 0;
  std::vector<double> toa;
  std::vector<double> truth;
  std::vector<std::vector<double>> mags;
  toa.reserve(cap.samples.size());
  truth.reserve(cap.samples.size());
  mags.reserve(cap.samples.size());
  for (size_t i = 0; i < cap.samples.size(); ++i) {
    locked += cap.log[i].lock ? 1 : 0;
    toa.push_back(cap.samples[i].toa_samples);
    truth.push_back(cap.samples[i].true_range_m);
    mags.push_back(cap.samples[i].magnitudes);
  }
  d["lock_fraction"] = cap.samples.empty() ? 0.0 : double(locked) / double(cap.samples.size());
  d["toa_samples"] = toa;
  d["true_range_m"] = truth;
  d["magnitudes"] = mags;
  return d;
}

py::dict compute_metrics(const std::vector<double>& predictions, const std::vector<double>& truths) {
  const eval::RangingReport r = eval::compute_metrics(predictions, truths, "py", "py");
  py::dict d;
  d["n"] = r.errors_m.size();
  d["rmse_m"] = r.rmse_m;
  d["mean_error_m"] = r.mean_error_m;
  d["std_m"] = r.std_m;
  d["abs_std_m"] = r.abs_std_m;
  d["max_abs_error_m"] = r.max_abs_error_m;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LTE CIR ranging core (signal synthesis, software receiver, metrics)";
  m.attr("__version__") = "0.1.0";

  m.def("grid_config", &grid_config_dict, py::arg("bandwidth_mhz"),
        "Downlink grid parameters for a standard LTE bandwidth.");
  m.def("default_scenario_json", [] { return sim::scenario_to_json(sim::ScenarioConfig{}); },
        "Default indoor scenario as a JSON string.");
  m.def("simulate", &simulate, py::arg("scenario_json"), py::arg("seed"), py::arg("out_dir"),
        "Synthesize rover/base IQ captures plus truth tables; returns the file paths.");
  m.def("receive", &receive, py::arg("iq_path"), py::arg("truth_csv") = std::string{},
        py::arg("n_cir") = 100,
        "Run the software receiver over a capture; returns per-frame TOA, labels and "
        "aligned CIR magnitudes.");
  m.def("quantize_cir",
        [](const std::vector<double>& mags, int levels, double scale) {
          return ranging::quantize_cir(mags, levels, scale);
        },
        py::arg("magnitudes"), py::arg("levels"), py::arg("scale"));
  m.def("normalize_cir",
        [](const std::vector<double>& mags, double scale) {
          return ranging::normalize_cir(mags, scale);
        },
        py::arg("magnitudes"), py::arg("scale"));
  m.def("compute_metrics", &compute_metrics, py::arg("predictions"), py::arg("truths"),
        "Ranging error metrics (RMSE, bias, spread, worst case).");
}
