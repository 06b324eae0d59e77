#include "ltecir/eval/pipeline.hpp"

#include <json.hpp>

#include "ltecir/io/csv.hpp"

namespace ltecir::eval {

namespace {

std::string csv_text(const std::string& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += io::format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

void emit_artifacts(const std::vector<ModelArtifacts>& models,
                    const std::optional<Comparison>& comparison,
                    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  nlohmann::json j;
  j["models"] = nlohmann::json::array();
  for (const auto& m : models) {
    const RangingReport& r = m.report;
    j["dataset"] = r.dataset_id;
    j["models"].push_back({{"model", r.model_id},
                           {"n_samples", r.errors_m.size()},
                           {"rmse_m", r.rmse_m},
                           {"mean_error_m", r.mean_error_m},
                           {"std_m", r.std_m},
                           {"abs_std_m", r.abs_std_m},
                           {"max_abs_error_m", r.max_abs_error_m}});

    std::vector<std::vector<double>> cdf_rows;
    for (const auto& [e, f] : r.cdf) cdf_rows.push_back({e, f});
    io::atomic_write_text(out_dir / ("cdf_" + r.model_id + ".csv"),
                          csv_text("error_m,fraction", cdf_rows));

    std::vector<std::vector<double>> err_rows;
    for (size_t i = 0; i < r.errors_m.size(); ++i)
      err_rows.push_back({static_cast<double>(i), r.errors_m[i]});
    io::atomic_write_text(out_dir / ("errors_" + r.model_id + ".csv"),
                          csv_text("sample_index,error_m", err_rows));

    if (!m.record.train_rmse_m.empty()) {
      std::vector<std::vector<double>> loss_rows;
      for (size_t e = 0; e < m.record.train_rmse_m.size(); ++e)
        loss_rows.push_back(
            {static_cast<double>(e), m.record.train_rmse_m[e], m.record.val_rmse_m[e]});
      io::atomic_write_text(out_dir / ("loss_" + r.model_id + ".csv"),
                            csv_text("epoch,train_rmse_m,val_rmse_m", loss_rows));
    }
  }

  if (comparison) {
    const Comparison& c = *comparison;
    nlohmann::json jc;
    jc["model_a"] = c.model_a;
    jc["model_b"] = c.model_b;
    jc["rows"] = nlohmann::json::array();
    for (const auto& row : c.rows)
      jc["rows"].push_back(
          {{"metric", row.metric}, {"a", row.a}, {"b", row.b}, {"improvement", row.improvement}});
    j["comparison"] = jc;

    std::string cmp = "metric," + c.model_a + "," + c.model_b + ",improvement\n";
    for (const auto& row : c.rows)
      cmp += row.metric + "," + io::format_double(row.a) + "," + io::format_double(row.b) + "," +
             io::format_double(row.improvement) + "\n";
    io::atomic_write_text(out_dir / "comparison.csv", cmp);
    io::atomic_write_text(out_dir / "report.txt", render_comparison(c));
  }

  io::atomic_write_text(out_dir / "metrics.json", j.dump(2) + "\n");
}

}  // namespace ltecir::eval
