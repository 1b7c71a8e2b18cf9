#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bullyrank::metrics {

// Standard multi-class classification metrics. Confusion rows are indexed by
// true class, columns by predicted class, so each row sums to that class's
// support.
struct MetricsReport {
  std::size_t n_classes = 0;
  std::size_t total = 0;
  std::vector<std::vector<std::size_t>> confusion;
  double accuracy = 0.0;
  std::vector<double> precision, recall, f1;  // per class
  double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
};

// n_classes = 0 infers the class count from the largest label seen.
MetricsReport compute_metrics(const std::vector<int>& predicted, const std::vector<int>& truth,
                              std::size_t n_classes = 0);

// Aligned human-readable table (one row per class plus the macro line).
std::string render_text(const MetricsReport& r, const std::vector<std::string>& class_names);

}  // namespace bullyrank::metrics
