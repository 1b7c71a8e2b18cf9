#include "bullyrank/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace bullyrank::metrics {

MetricsReport compute_metrics(const std::vector<int>& predicted, const std::vector<int>& truth,
                              std::size_t n_classes) {
  if (predicted.empty() || predicted.size() != truth.size())
    throw std::runtime_error("compute_metrics: label sequences empty or of unequal length");
  int max_label = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] < 0 || truth[i] < 0)
      throw std::runtime_error("compute_metrics: negative label");
    max_label = std::max({max_label, predicted[i], truth[i]});
  }
  MetricsReport r;
  r.n_classes = n_classes > 0 ? n_classes : static_cast<std::size_t>(max_label) + 1;
  if (static_cast<std::size_t>(max_label) >= r.n_classes)
    throw std::runtime_error("compute_metrics: label outside the declared class range");
  r.total = truth.size();
  r.confusion.assign(r.n_classes, std::vector<std::size_t>(r.n_classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i)
    r.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])]++;

  std::size_t trace = 0;
  r.precision.resize(r.n_classes);
  r.recall.resize(r.n_classes);
  r.f1.resize(r.n_classes);
  for (std::size_t c = 0; c < r.n_classes; ++c) {
    std::size_t tp = r.confusion[c][c];
    trace += tp;
    std::size_t support = 0, predicted_c = 0;
    for (std::size_t k = 0; k < r.n_classes; ++k) {
      support += r.confusion[c][k];
      predicted_c += r.confusion[k][c];
    }
    r.precision[c] = predicted_c == 0
                         ? 0.0
                         : static_cast<double>(tp) / static_cast<double>(predicted_c);
    r.recall[c] = support == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(support);
    double pr = r.precision[c] + r.recall[c];
    r.f1[c] = pr == 0.0 ? 0.0 : 2.0 * r.precision[c] * r.recall[c] / pr;
    r.macro_precision += r.precision[c];
    r.macro_recall += r.recall[c];
    r.macro_f1 += r.f1[c];
  }
  r.accuracy = static_cast<double>(trace) / static_cast<double>(r.total);
  r.macro_precision /= static_cast<double>(r.n_classes);
  r.macro_recall /= static_cast<double>(r.n_classes);
  r.macro_f1 /= static_cast<double>(r.n_classes);
  return r;
}

std::string render_text(const MetricsReport& r, const std::vector<std::string>& class_names) {
  if (class_names.size() != r.n_classes)
    throw std::runtime_error("render_text: class name count mismatch");
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "accuracy %.4f over %zu examples\n", r.accuracy, r.total);
  out += buf;
  out += "class                precision   recall       f1  support\n";
  for (std::size_t c = 0; c < r.n_classes; ++c) {
    std::size_t support = 0;
    for (std::size_t k = 0; k < r.n_classes; ++k) support += r.confusion[c][k];
    std::snprintf(buf, sizeof buf, "%-20s %9.4f %8.4f %8.4f %8zu\n", class_names[c].c_str(),
                  r.precision[c], r.recall[c], r.f1[c], support);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-20s %9.4f %8.4f %8.4f %8zu\n", "macro", r.macro_precision,
                r.macro_recall, r.macro_f1, r.total);
  out += buf;
  out += "confusion (rows = truth, columns = predicted)\n";
  for (std::size_t c = 0; c < r.n_classes; ++c) {
    for (std::size_t k = 0; k < r.n_classes; ++k) {
      std::snprintf(buf, sizeof buf, "%8zu", r.confusion[c][k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace bullyrank::metrics
