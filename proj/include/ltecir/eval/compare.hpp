#pragma once

#include <string>
#include <vector>

#include "ltecir/eval/metrics.hpp"

namespace ltecir::eval {

struct ComparisonRow {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double improvement = 0.0;  // (a - b) / a; 0 when a == b
};

struct Comparison {
  std::string model_a, model_b, dataset_id;
  std::vector<ComparisonRow> rows;
  std::string footnote;
};

// Side-by-side metrics with relative improvement of b over a.  Reports must
// come from the same dataset.
Comparison compare_models(const RangingReport& a, const RangingReport& b);

// Fixed-width text table in the familiar three-row layout, footnote included.
std::string render_comparison(const Comparison& c);

}  // namespace ltecir::eval
