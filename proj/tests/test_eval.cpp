#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ltecir/eval/compare.hpp"
#include "ltecir/eval/metrics.hpp"
#include "ltecir/eval/pipeline.hpp"
#include "ltecir/io/csv.hpp"
#include "ltecir/rng.hpp"

using namespace ltecir;
using namespace ltecir::eval;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ltecir_eval_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 41 errors whose population stats hit the three-row summary exactly:
// {max} + 20x{t+u} + 20x{t-u}.
std::vector<double> fixture_errors(double mx, double t, double u) {
  std::vector<double> e{mx};
  e.insert(e.end(), 20, t + u);
  e.insert(e.end(), 20, t - u);
  return e;
}

std::vector<double> baseline_fixture() {
  return fixture_errors(55.68, 8.211500637788285, 5.588702870577626);
}
std::vector<double> proposed_fixture() {
  return fixture_errors(27.40, 6.720609039775189, 4.411215720693335);
}

RangingReport report_from_errors(const std::vector<double>& errors, const std::string& model,
                                 const std::string& dataset = "fixture") {
  const std::vector<double> truths(errors.size(), 0.0);
  return compute_metrics(errors, truths, model, dataset);
}

}  // namespace

TEST_CASE("compute_metrics: identity gives all-zero stats") {
  Rng rng(3);
  std::vector<double> x(64);
  for (double& v : x) v = 100.0 * rng.uniform();
  const auto r = compute_metrics(x, x, "m", "d");
  CHECK(r.rmse_m == 0.0);
  CHECK(r.std_m == 0.0);
  CHECK(r.abs_std_m == 0.0);
  CHECK(r.max_abs_error_m == 0.0);
  REQUIRE(r.cdf.size() == 1);
  CHECK(r.cdf[0].first == 0.0);
  CHECK(r.cdf[0].second == 1.0);
}

TEST_CASE("compute_metrics: errors [3, -4] hand values") {
  const std::vector<double> pred{3.0, -4.0}, truth{0.0, 0.0};
  const auto r = compute_metrics(pred, truth, "m", "d");
  CHECK(r.rmse_m == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
  CHECK(r.mean_error_m == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(r.std_m == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(r.abs_std_m == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.max_abs_error_m == 4.0);
  REQUIRE(r.cdf.size() == 2);
  CHECK(r.cdf[0] == std::pair{3.0, 0.5});
  CHECK(r.cdf[1] == std::pair{4.0, 1.0});

  CHECK_THROWS_AS((void)compute_metrics({}, {}, "m", "d"), std::invalid_argument);
  CHECK_THROWS_AS((void)compute_metrics(pred, std::vector<double>{1.0}, "m", "d"),
                  std::invalid_argument);
}

TEST_CASE("CDF is non-decreasing over sorted distinct |errors| and ends at 1.0") {
  for (uint64_t seed : {1, 2, 3, 4, 5}) {
    Rng rng(seed);
    std::vector<double> pred(100), truth(100, 0.0);
    for (double& v : pred) v = std::round(20.0 * (rng.uniform() - 0.5));  // forces ties
    const auto r = compute_metrics(pred, truth, "m", "d");
    CHECK(r.cdf.back().second == 1.0);
    for (size_t i = 1; i < r.cdf.size(); ++i) {
      CHECK(r.cdf[i].first > r.cdf[i - 1].first);
      CHECK(r.cdf[i].second > r.cdf[i - 1].second);
    }
    // max|error| is the last CDF abscissa
    CHECK(r.cdf.back().first == r.max_abs_error_m);
  }
}

TEST_CASE("Table-1 fixture reproduces the published rows and the 31.2% ratio") {
  const auto base = report_from_errors(baseline_fixture(), "baseline");
  CHECK(base.rmse_m == doctest::Approx(13.11).epsilon(1e-12));
  CHECK(base.std_m == doctest::Approx(9.17).epsilon(1e-12));
  CHECK(base.max_abs_error_m == doctest::Approx(55.68).epsilon(1e-12));

  const auto prop = report_from_errors(proposed_fixture(), "proposed");
  CHECK(prop.rmse_m == doctest::Approx(9.02).epsilon(1e-12));
  CHECK(prop.std_m == doctest::Approx(5.40).epsilon(1e-12));
  CHECK(prop.max_abs_error_m == doctest::Approx(27.40).epsilon(1e-12));

  const auto cmp = compare_models(base, prop);
  CHECK(cmp.rows[0].metric == "rmse_m");
  CHECK(cmp.rows[0].improvement == doctest::Approx(0.312).epsilon(2e-3));
  // the footnote recomputes the ratio and flags the inconsistent headline
  CHECK(cmp.footnote.find("31.2%") != std::string::npos);
  CHECK(cmp.footnote.find("68.8%") != std::string::npos);
  CHECK(cmp.footnote.find("inconsistent") != std::string::npos);

  const auto text = render_comparison(cmp);
  CHECK(text.find("RMSE (m)") != std::string::npos);
  CHECK(text.find("13.11") != std::string::npos);
  CHECK(text.find("27.40") != std::string::npos);
  CHECK(text.find("Maximum error (m)") != std::string::npos);
}

TEST_CASE("compare_models: identical reports give 0% improvement; datasets must match") {
  const auto a = report_from_errors(baseline_fixture(), "a");
  const auto b = report_from_errors(baseline_fixture(), "b");
  const auto cmp = compare_models(a, b);
  for (const auto& row : cmp.rows) CHECK(row.improvement == 0.0);

  auto other = report_from_errors(proposed_fixture(), "c", "another-dataset");
  CHECK_THROWS_WITH_AS((void)compare_models(a, other),
                       doctest::Contains("dataset mismatch"), std::runtime_error);
}

TEST_CASE("emit_artifacts writes the full artifact set") {
  const auto dir = temp_dir("emit");
  ModelArtifacts base{report_from_errors(baseline_fixture(), "baseline"), {}};
  ModelArtifacts prop{report_from_errors(proposed_fixture(), "proposed"), {}};
  base.record.train_rmse_m = {20.0, 15.0, 13.2};
  base.record.val_rmse_m = {21.0, 16.0, 13.5};
  const auto cmp = compare_models(base.report, prop.report);

  emit_artifacts({base, prop}, cmp, dir);

  for (const char* f : {"metrics.json", "report.txt", "comparison.csv", "cdf_baseline.csv",
                        "cdf_proposed.csv", "errors_baseline.csv", "errors_proposed.csv",
                        "loss_baseline.csv"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(!std::filesystem::exists(dir / "loss_proposed.csv"));  // no record for it

  // errors file row count = test-set size; RMSE recomputes from the raw file
  const auto errs = io::read_csv(dir / "errors_baseline.csv");
  REQUIRE(errs.rows.size() == 41);
  double sq = 0.0;
  for (const auto& row : errs.rows) sq += row[1] * row[1];
  CHECK(std::sqrt(sq / 41.0) == doctest::Approx(base.report.rmse_m).epsilon(1e-12));

  // CDF file: monotone, last fraction 1.0
  const auto cdf = io::read_csv(dir / "cdf_proposed.csv");
  CHECK(cdf.rows.back()[1] == 1.0);
  for (size_t i = 1; i < cdf.rows.size(); ++i) CHECK(cdf.rows[i][1] > cdf.rows[i - 1][1]);

  // metrics.json carries every model and the comparison
  const auto j = nlohmann::json::parse(slurp(dir / "metrics.json"));
  REQUIRE(j["models"].size() == 2);
  CHECK(j["models"][0]["model"] == "baseline");
  CHECK(j["models"][0]["rmse_m"].get<double>() == doctest::Approx(13.11));
  CHECK(j["comparison"]["rows"][0]["metric"] == "rmse_m");
  CHECK(j["dataset"] == "fixture");

  // emit is deterministic byte for byte
  const std::string before = slurp(dir / "metrics.json");
  emit_artifacts({base, prop}, cmp, dir);
  CHECK(slurp(dir / "metrics.json") == before);

  // loss curve round trip
  const auto loss = io::read_csv(dir / "loss_baseline.csv");
  REQUIRE(loss.header == std::vector<std::string>{"epoch", "train_rmse_m", "val_rmse_m"});
  CHECK(loss.rows.size() == 3);
  CHECK(loss.rows[2][1] == 13.2);
}
