// ltecir command line: simulate -> receive -> make-dataset -> train -> evaluate,
// plus `pipeline` chaining all stages from one config and seed.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ltecir/eval/pipeline.hpp"
#include "ltecir/io/csv.hpp"
#include "ltecir/ranging/train.hpp"
#include "ltecir/rx/capture.hpp"
#include "ltecir/sim/dataset.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace ltecir;

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

rx::Align align_from_string(const std::string& s) {
  if (s == "toa") return rx::Align::kToa;
  if (s == "peak") return rx::Align::kPeak;
  throw std::runtime_error("unknown --align value: " + s + " (toa|peak)");
}

rx::Eq1Scale eq1_from_string(const std::string& s) {
  if (s == "literal") return rx::Eq1Scale::kLiteral;
  if (s == "dimensional") return rx::Eq1Scale::kDimensional;
  throw std::runtime_error("unknown --eq1-scale value: " + s + " (literal|dimensional)");
}

ranging::OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "adam") return ranging::OptimizerKind::kAdam;
  if (s == "sgd-decay") return ranging::OptimizerKind::kSgdDecay;
  throw std::runtime_error("unknown --optimizer value: " + s + " (adam|sgd-decay)");
}

rx::ReceiverConfig receiver_from_json(const json& j) {
  rx::ReceiverConfig rc;
  rc.n_cir = j.value("n_cir", rc.n_cir);
  if (j.contains("align")) rc.align = align_from_string(j.at("align").get<std::string>());
  if (j.contains("eq1_scale"))
    rc.eq1_scale = eq1_from_string(j.at("eq1_scale").get<std::string>());
  rc.loop_bandwidth_hz = j.value("loop_bandwidth_hz", rc.loop_bandwidth_hz);
  rc.damping = j.value("damping", rc.damping);
  rc.acq_threshold = j.value("acq_threshold", rc.acq_threshold);
  rc.max_model_order = j.value("max_model_order", rc.max_model_order);
  rc.eig_ratio_threshold = j.value("eig_ratio_threshold", rc.eig_ratio_threshold);
  return rc;
}

double lock_fraction(const std::vector<rx::TrackingLogRow>& log) {
  if (log.empty()) return 0.0;
  size_t locked = 0;
  for (const auto& row : log) locked += row.lock ? 1 : 0;
  return static_cast<double>(locked) / static_cast<double>(log.size());
}

// ---------------------------------------------------------------- simulate

sim::DatasetPaths do_simulate(const sim::ScenarioConfig& sc, const fs::path& out) {
  fs::create_directories(out);
  const auto paths = sim::generate_dataset(sc, out);
  io::atomic_write_text(out / "scenario.json", sim::scenario_to_json(sc));
  std::cout << fmt("simulate: %d frames, %.1f MHz, cell %d, seed %llu -> %s\n", paths.frames,
                   sc.bandwidth_mhz, sc.cell_id,
                   static_cast<unsigned long long>(sc.seed), out.string().c_str());
  return paths;
}

// ----------------------------------------------------------------- receive

struct ReceiveOutputs {
  fs::path cir_csv;
  rx::CaptureResult rover;
};

ReceiveOutputs do_receive(const fs::path& iq, const fs::path& truth, const fs::path& base_iq,
                          const fs::path& base_truth, const rx::ReceiverConfig& rc,
                          const fs::path& out) {
  fs::create_directories(out);
  rx::CaptureResult cap = rx::process_capture(iq, rc, truth);
  rx::write_cir_csv(cap.samples, out / "cir.csv");
  rx::write_tracking_csv(cap.log, out / "tracking.csv");

  std::string diff_note;
  if (!base_iq.empty()) {
    if (base_truth.empty())
      throw std::runtime_error("--base-truth is required with --base-iq");
    rx::CaptureResult base = rx::process_capture(base_iq, rc, base_truth);
    rx::write_tracking_csv(base.log, out / "tracking_base.csv");
    double base_range = std::nan("");
    for (const auto& s : base.samples)
      if (std::isfinite(s.true_range_m)) {
        base_range = s.true_range_m;
        break;
      }
    if (!std::isfinite(base_range))
      throw std::runtime_error("base truth has no finite range: " + base_truth.string());
    const auto corrected =
        rx::remove_clock_bias(cap.log, base.log, base_range, cap.cfg.sample_period_s());
    io::CsvWriter w(out / "range_est.csv", {"frame", "range_m"});
    for (size_t i = 0; i < corrected.size(); ++i)
      w.row({static_cast<double>(cap.log[i].frame), corrected[i]});
    w.close();
    diff_note = ", differential range_est.csv";
  }

  std::cout << fmt("receive: cell %d, %zu frames, lock %.1f%%%s -> %s\n", cap.acq.cell_id,
                   cap.samples.size(), 100.0 * lock_fraction(cap.log), diff_note.c_str(),
                   (out / "cir.csv").string().c_str());
  return {out / "cir.csv", std::move(cap)};
}

// ------------------------------------------------------------ make-dataset

fs::path do_make_dataset(const fs::path& cir_csv, uint64_t seed, bool chronological, int vocab,
                         const fs::path& out) {
  fs::create_directories(out);
  const auto ds = ranging::load_cir_csv(cir_csv);
  const auto split = ranging::split_dataset(ds.size(), seed, chronological);
  const double scale = ranging::normalization_scale(ds);

  json j;
  j["cir_csv"] = fs::weakly_canonical(cir_csv).string();
  j["dataset_id"] = fmt("cir:n=%zu:ncir=%d:seed=%llu:chron=%d", ds.size(), ds.n_cir(),
                        static_cast<unsigned long long>(seed), chronological ? 1 : 0);
  j["n"] = ds.size();
  j["n_cir"] = ds.n_cir();
  j["scale"] = scale;
  j["vocab"] = vocab;
  j["seed"] = seed;
  j["chronological"] = chronological;
  j["split"] = {{"train", split.train}, {"val", split.val}, {"test", split.test}};
  const fs::path path = out / "dataset.json";
  io::atomic_write_text(path, j.dump(2) + "\n");

  std::cout << fmt("make-dataset: %zu samples, n_cir %d, split %zu/%zu/%zu, scale %.6g -> %s\n",
                   ds.size(), ds.n_cir(), split.train.size(), split.val.size(),
                   split.test.size(), scale, path.string().c_str());
  return path;
}

// ------------------------------------------------------------------- train

struct DatasetBundle {
  ranging::CirDataset ds;
  ranging::Split split;
  std::string dataset_id;
  double scale = 0.0;
  int vocab = 256;
  int n_cir = 0;
};

DatasetBundle load_dataset_bundle(const fs::path& dataset_json) {
  const json j = load_json(dataset_json);
  DatasetBundle b;
  fs::path cir = j.at("cir_csv").get<std::string>();
  if (cir.is_relative()) cir = dataset_json.parent_path() / cir;
  b.ds = ranging::load_cir_csv(cir);
  if (b.ds.size() != j.at("n").get<size_t>())
    throw std::runtime_error("dataset size changed since make-dataset: " + cir.string());
  b.split.train = j.at("split").at("train").get<std::vector<size_t>>();
  b.split.val = j.at("split").at("val").get<std::vector<size_t>>();
  b.split.test = j.at("split").at("test").get<std::vector<size_t>>();
  b.dataset_id = j.at("dataset_id").get<std::string>();
  b.scale = j.at("scale").get<double>();
  b.vocab = j.at("vocab").get<int>();
  b.n_cir = j.at("n_cir").get<int>();
  return b;
}

struct TrainOptions {
  std::string variant = "proposed";
  std::string optimizer = "adam";
  double dropout = 0.0;
  int epochs = 300;
  int batch_size = 32;
  double lr = 1e-3;
  double sgd_lr0 = 0.1;
  bool staircase = false;
  bool dense_front_end = false;
  bool train_on_rmse = false;
  int embed_dim = 128;
  int hidden = 128;
  uint64_t seed = 1;
};

fs::path do_train(const fs::path& dataset_json, const TrainOptions& opt, const fs::path& out) {
  fs::create_directories(out);
  const DatasetBundle b = load_dataset_bundle(dataset_json);

  ranging::ModelSpec spec;
  spec.variant = ranging::variant_from_string(opt.variant);
  spec.vocab = b.vocab;
  spec.embed_dim = opt.embed_dim;
  spec.hidden = opt.hidden;
  spec.n_cir = b.n_cir;
  spec.dropout_rate = opt.dropout;
  spec.dense_front_end = opt.dense_front_end;

  const auto data = ranging::prepare_inputs(b.ds, spec);
  if (std::abs(data.scale - b.scale) > 1e-9 * std::max(1.0, b.scale))
    throw std::runtime_error("normalization scale drifted from dataset.json");

  ranging::RangingModel model(spec, opt.seed);
  ranging::TrainConfig cfg;
  cfg.epochs = opt.epochs;
  cfg.batch_size = opt.batch_size;
  cfg.seed = opt.seed;
  cfg.optimizer = optimizer_from_string(opt.optimizer);
  cfg.adam.lr = opt.lr;
  cfg.sgd.lr0 = opt.sgd_lr0;
  cfg.sgd.staircase = opt.staircase;
  cfg.train_on_rmse = opt.train_on_rmse;

  const auto rec = ranging::train_model(model, data, b.split.train, b.split.val, cfg);

  const fs::path ckpt = out / ("model_" + opt.variant + ".ckpt");
  model.save(ckpt);
  ranging::write_train_record_csv(out / ("loss_" + opt.variant + ".csv"), rec);

  json meta;
  meta["variant"] = opt.variant;
  meta["vocab"] = spec.vocab;
  meta["embed_dim"] = spec.embed_dim;
  meta["hidden"] = spec.hidden;
  meta["n_cir"] = spec.n_cir;
  meta["dropout_rate"] = spec.dropout_rate;
  meta["dense_front_end"] = spec.dense_front_end;
  meta["optimizer"] = opt.optimizer;
  meta["epochs"] = opt.epochs;
  meta["batch_size"] = opt.batch_size;
  meta["seed"] = opt.seed;
  meta["dataset_id"] = b.dataset_id;
  if (!rec.train_rmse_m.empty()) {
    meta["final_train_rmse_m"] = rec.train_rmse_m.back();
    meta["final_val_rmse_m"] = rec.val_rmse_m.back();
  }
  io::atomic_write_text(out / ("model_" + opt.variant + ".meta.json"), meta.dump(2) + "\n");

  const double tr = rec.train_rmse_m.empty() ? 0.0 : rec.train_rmse_m.back();
  const double va = rec.val_rmse_m.empty() ? 0.0 : rec.val_rmse_m.back();
  std::cout << fmt("train: %s, %d epochs, train %.3f m, val %.3f m -> %s\n",
                   opt.variant.c_str(), opt.epochs, tr, va, ckpt.string().c_str());
  return ckpt;
}

// ---------------------------------------------------------------- evaluate

ranging::TrainRecord read_train_record(const fs::path& loss_csv) {
  ranging::TrainRecord rec;
  if (!fs::exists(loss_csv)) return rec;
  const auto t = io::read_csv(loss_csv);
  const int ct = t.col("train_rmse_m"), cv = t.col("val_rmse_m");
  if (ct < 0 || cv < 0) return rec;
  for (const auto& row : t.rows) {
    rec.train_rmse_m.push_back(row[ct]);
    rec.val_rmse_m.push_back(row[cv]);
  }
  return rec;
}

fs::path do_evaluate(const fs::path& dataset_json, const std::vector<fs::path>& ckpts,
                     const fs::path& out) {
  if (ckpts.empty()) throw std::runtime_error("at least one --model is required");
  fs::create_directories(out);
  const DatasetBundle b = load_dataset_bundle(dataset_json);

  std::vector<double> test_truth;
  for (size_t i : b.split.test) test_truth.push_back(b.ds.range_m[i]);

  std::vector<eval::ModelArtifacts> artifacts;
  std::string summary = "evaluate:";
  for (const fs::path& ckpt : ckpts) {
    const fs::path meta_path = ckpt.parent_path() / (ckpt.stem().string() + ".meta.json");
    const json meta = load_json(meta_path);
    ranging::ModelSpec spec;
    spec.variant = ranging::variant_from_string(meta.at("variant").get<std::string>());
    spec.vocab = meta.at("vocab").get<int>();
    spec.embed_dim = meta.at("embed_dim").get<int>();
    spec.hidden = meta.at("hidden").get<int>();
    spec.n_cir = meta.at("n_cir").get<int>();
    spec.dropout_rate = meta.at("dropout_rate").get<double>();
    spec.dense_front_end = meta.at("dense_front_end").get<bool>();
    if (meta.at("dataset_id").get<std::string>() != b.dataset_id)
      throw std::runtime_error("model " + ckpt.string() + " was trained on a different dataset");

    ranging::RangingModel model(spec, 0);
    model.load(ckpt);
    const auto data = ranging::prepare_inputs(b.ds, spec);
    const auto preds = ranging::predict_all(model, data, b.split.test);

    std::string id = meta.at("variant").get<std::string>();
    for (const auto& a : artifacts)
      if (a.report.model_id == id) id += "-2";
    eval::ModelArtifacts ma;
    ma.report = eval::compute_metrics(preds, test_truth, id, b.dataset_id);
    ma.record = read_train_record(ckpt.parent_path() / ("loss_" + id + ".csv"));
    summary += fmt(" %s rmse %.3f m,", id.c_str(), ma.report.rmse_m);
    artifacts.push_back(std::move(ma));
  }

  // predict-training-mean strawman rides along as the floor reference
  double mean = 0.0;
  for (size_t i : b.split.train) mean += b.ds.range_m[i];
  mean /= static_cast<double>(b.split.train.size());
  eval::ModelArtifacts straw;
  straw.report = eval::compute_metrics(std::vector<double>(test_truth.size(), mean), test_truth,
                                       "mean-strawman", b.dataset_id);
  summary += fmt(" mean-strawman rmse %.3f m", straw.report.rmse_m);
  artifacts.push_back(std::move(straw));

  std::optional<eval::Comparison> cmp;
  if (ckpts.size() >= 2)
    cmp = eval::compare_models(artifacts[0].report, artifacts[1].report);
  eval::emit_artifacts(artifacts, cmp, out);
  std::cout << summary << " -> " << (out / "metrics.json").string() << "\n";
  return out / "metrics.json";
}

// ---------------------------------------------------------------- pipeline

void do_pipeline(const fs::path& config, uint64_t seed, bool seed_set, const fs::path& out) {
  const json j = load_json(config);

  sim::ScenarioConfig sc;
  if (j.contains("scenario_file")) {
    fs::path sf = j.at("scenario_file").get<std::string>();
    if (sf.is_relative()) sf = config.parent_path() / sf;
    sc = sim::load_scenario(sf);
  } else if (j.contains("scenario")) {
    sc = sim::scenario_from_json(j.at("scenario").dump());
  }
  if (seed_set) sc.seed = seed;

  const rx::ReceiverConfig rc = receiver_from_json(j.value("receiver", json::object()));

  const json jd = j.value("dataset", json::object());
  const json jt = j.value("train", json::object());

  const auto paths = do_simulate(sc, out / "sim");

  const bool differential = j.value("differential", true);
  const auto rx_out = do_receive(paths.rover_iq, paths.truth,
                                 differential ? paths.base_iq : fs::path{},
                                 differential ? paths.truth_base : fs::path{}, rc, out / "rx");

  const auto dataset_json =
      do_make_dataset(rx_out.cir_csv, sc.seed, jd.value("chronological", false),
                      jd.value("vocab", 256), out / "data");

  TrainOptions topt;
  topt.optimizer = jt.value("optimizer", topt.optimizer);
  topt.dropout = jt.value("dropout", topt.dropout);
  topt.epochs = jt.value("epochs", topt.epochs);
  topt.batch_size = jt.value("batch_size", topt.batch_size);
  topt.lr = jt.value("lr", topt.lr);
  topt.sgd_lr0 = jt.value("sgd_lr0", topt.sgd_lr0);
  topt.staircase = jt.value("staircase", topt.staircase);
  topt.embed_dim = jt.value("embed_dim", topt.embed_dim);
  topt.hidden = jt.value("hidden", topt.hidden);
  topt.seed = sc.seed;

  std::vector<fs::path> ckpts;
  for (const auto& v : jt.value("variants", std::vector<std::string>{"baseline", "proposed"})) {
    TrainOptions vopt = topt;
    vopt.variant = v;
    ckpts.push_back(do_train(dataset_json, vopt, out / "models"));
  }

  const auto metrics = do_evaluate(dataset_json, ckpts, out / "eval");
  std::cout << "pipeline: done, metrics at " << metrics.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTE downlink CIR ranging toolkit"};
  app.require_subcommand(1);

  // shared option storage
  std::string config_path, out_dir, iq_path, truth_path, base_iq, base_truth, cir_path,
      dataset_path, align_str, eq1_str;
  std::vector<std::string> model_paths;
  uint64_t seed = 1;
  bool chronological = false;
  int vocab = 256;
  int n_cir_override = -1;
  TrainOptions topt;

  auto* c_sim = app.add_subcommand("simulate", "synthesize IQ captures and truth tables");
  c_sim->add_option("--config", config_path, "scenario JSON");
  bool sim_seed_set = false;
  c_sim->add_option("--seed", seed, "scenario seed override")
      ->each([&](const std::string&) { sim_seed_set = true; });
  c_sim->add_option("--out", out_dir, "output directory")->required();

  auto* c_rx = app.add_subcommand("receive", "track a capture and extract aligned CIRs");
  c_rx->add_option("--iq", iq_path, "rover IQ file")->required();
  c_rx->add_option("--truth", truth_path, "rover truth CSV (labels)");
  c_rx->add_option("--base-iq", base_iq, "static base IQ file (differential)");
  c_rx->add_option("--base-truth", base_truth, "base truth CSV");
  c_rx->add_option("--config", config_path, "receiver JSON");
  c_rx->add_option("--align", align_str, "CIR alignment: toa|peak");
  c_rx->add_option("--eq1-scale", eq1_str, "TOA update scale: literal|dimensional");
  c_rx->add_option("--n-cir", n_cir_override, "CIR taps to keep");
  c_rx->add_option("--out", out_dir, "output directory")->required();

  auto* c_mk = app.add_subcommand("make-dataset", "split + quantization metadata from cir.csv");
  c_mk->add_option("--cir", cir_path, "cir.csv from receive")->required();
  c_mk->add_option("--seed", seed, "split seed");
  c_mk->add_flag("--chronological", chronological, "block split instead of shuffled");
  c_mk->add_option("--vocab", vocab, "quantization levels");
  c_mk->add_option("--out", out_dir, "output directory")->required();

  auto* c_tr = app.add_subcommand("train", "train a ranging model on a dataset bundle");
  c_tr->add_option("--dataset", dataset_path, "dataset.json from make-dataset")->required();
  c_tr->add_option("--variant", topt.variant, "proposed|baseline|complex");
  c_tr->add_option("--optimizer", topt.optimizer, "adam|sgd-decay");
  c_tr->add_option("--dropout", topt.dropout, "dropout rate");
  c_tr->add_option("--epochs", topt.epochs, "training epochs");
  c_tr->add_option("--batch-size", topt.batch_size, "minibatch size");
  c_tr->add_option("--lr", topt.lr, "Adam learning rate");
  c_tr->add_option("--sgd-lr0", topt.sgd_lr0, "SGD-decay initial rate");
  c_tr->add_flag("--staircase", topt.staircase, "staircase lr decay");
  c_tr->add_flag("--dense-front-end", topt.dense_front_end,
                 "linear per-tap projection instead of quantize+embed");
  c_tr->add_flag("--train-on-rmse", topt.train_on_rmse, "literal RMSE loss");
  c_tr->add_option("--embed-dim", topt.embed_dim, "embedding width");
  c_tr->add_option("--hidden", topt.hidden, "recurrent width");
  c_tr->add_option("--seed", topt.seed, "init/shuffle/dropout seed");
  c_tr->add_option("--out", out_dir, "output directory")->required();

  auto* c_ev = app.add_subcommand("evaluate", "test-split metrics and report artifacts");
  c_ev->add_option("--dataset", dataset_path, "dataset.json from make-dataset")->required();
  c_ev->add_option("--model", model_paths, "model checkpoint (repeatable)")->required();
  c_ev->add_option("--out", out_dir, "output directory")->required();

  auto* c_pl = app.add_subcommand("pipeline", "simulate -> receive -> dataset -> train -> eval");
  c_pl->add_option("--config", config_path, "pipeline JSON")->required();
  bool pl_seed_set = false;
  c_pl->add_option("--seed", seed, "seed for every stage")
      ->each([&](const std::string&) { pl_seed_set = true; });
  c_pl->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);
  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (c_sim->parsed()) {
      sim::ScenarioConfig sc;
      if (!config_path.empty()) {
        // accept either a bare scenario file or a pipeline config
        json j = load_json(config_path);
        sc = sim::scenario_from_json(j.contains("scenario") ? j.at("scenario").dump() : j.dump());
      }
      if (sim_seed_set) sc.seed = seed;
      sc.validate();
      do_simulate(sc, out_dir);
    } else if (c_rx->parsed()) {
      rx::ReceiverConfig rc;
      if (!config_path.empty()) {
        json j = load_json(config_path);
        rc = receiver_from_json(j.contains("receiver") ? j.at("receiver") : j);
      }
      if (!align_str.empty()) rc.align = align_from_string(align_str);
      if (!eq1_str.empty()) rc.eq1_scale = eq1_from_string(eq1_str);
      if (n_cir_override > 0) rc.n_cir = n_cir_override;
      do_receive(iq_path, truth_path, base_iq, base_truth, rc, out_dir);
    } else if (c_mk->parsed()) {
      do_make_dataset(cir_path, seed, chronological, vocab, out_dir);
    } else if (c_tr->parsed()) {
      do_train(dataset_path, topt, out_dir);
    } else if (c_ev->parsed()) {
      std::vector<fs::path> ckpts(model_paths.begin(), model_paths.end());
      do_evaluate(dataset_path, ckpts, out_dir);
    } else if (c_pl->parsed()) {
      do_pipeline(config_path, seed, pl_seed_set, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << stage << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
