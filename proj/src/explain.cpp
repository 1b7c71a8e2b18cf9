#include "bullyrank/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bullyrank/features.hpp"
#include "bullyrank/rng.hpp"

namespace bullyrank::explain {

namespace {

constexpr std::size_t kPlayers = 11;

// Solves A x = b for symmetric positive-definite A (in place, Cholesky).
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (d <= 0.0) throw std::runtime_error("ridge solve: matrix not positive definite");
    a[j * n + j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / a[j * n + j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return b;
}

void sort_by_magnitude(std::vector<Attribution>& attrs) {
  std::stable_sort(attrs.begin(), attrs.end(), [](const Attribution& a, const Attribution& b) {
    return std::fabs(a.weight) > std::fabs(b.weight);
  });
}

}  // namespace

Explanation lime_explain(const MixedPredictor& f, const textprep::TokenizedText& text,
                         const std::vector<double>& fixed_tabular, std::size_t n_samples,
                         std::uint64_t seed, int target_class) {
  if (text.tokens.empty()) throw std::runtime_error("lime_explain: text has no tokens");
  if (n_samples == 0) throw std::runtime_error("lime_explain: need at least one sample");

  // Distinct tokens in first-occurrence order are the interpretable units; a
  // mask bit removes every occurrence of its token.
  std::vector<std::string> distinct;
  for (const auto& t : text.tokens)
    if (std::find(distinct.begin(), distinct.end(), t) == distinct.end()) distinct.push_back(t);
  const std::size_t T = distinct.size();

  Rng rng(stage_seed(seed, "explain/lime"));
  std::vector<std::vector<double>> masks(n_samples, std::vector<double>(T));
  std::vector<double> ys(n_samples), ws(n_samples);
  std::vector<std::string> kept;
  for (std::size_t s = 0; s < n_samples; ++s) {
    std::size_t on = 0;
    for (std::size_t j = 0; j < T; ++j) {
      masks[s][j] = rng.bernoulli(0.5) ? 1.0 : 0.0;
      on += masks[s][j] > 0.5;
    }
    kept.clear();
    for (const auto& tok : text.tokens) {
      std::size_t j = static_cast<std::size_t>(
          std::find(distinct.begin(), distinct.end(), tok) - distinct.begin());
      if (masks[s][j] > 0.5) kept.push_back(tok);
    }
    ys[s] = f(kept, fixed_tabular);
    // Cosine distance between the mask and the all-ones original, then an
    // exponential kernel with width 0.25.
    double cos = on == 0 ? 0.0 : std::sqrt(static_cast<double>(on) / static_cast<double>(T));
    double d = 1.0 - cos;
    ws[s] = std::exp(-(d * d) / (0.25 * 0.25));
  }

  // Weighted ridge regression with a centered, unpenalized intercept.
  double sw = 0.0;
  for (double w : ws) sw += w;
  std::vector<double> xbar(T, 0.0);
  double ybar = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    ybar += ws[s] * ys[s];
    for (std::size_t j = 0; j < T; ++j) xbar[j] += ws[s] * masks[s][j];
  }
  ybar /= sw;
  for (double& v : xbar) v /= sw;

  const double lambda = 1.0;
  std::vector<double> a(T * T, 0.0), b(T, 0.0);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t j = 0; j < T; ++j) {
      double xj = masks[s][j] - xbar[j];
      b[j] += ws[s] * xj * (ys[s] - ybar);
      for (std::size_t k = j; k < T; ++k)
        a[j * T + k] += ws[s] * xj * (masks[s][k] - xbar[k]);
    }
  }
  for (std::size_t j = 0; j < T; ++j) {
    a[j * T + j] += lambda;
    for (std::size_t k = j + 1; k < T; ++k) a[k * T + j] = a[j * T + k];
  }
  auto beta = solve_spd(a, b);

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    double pred = ybar;
    for (std::size_t j = 0; j < T; ++j) pred += beta[j] * (masks[s][j] - xbar[j]);
    ss_res += ws[s] * (ys[s] - pred) * (ys[s] - pred);
    ss_tot += ws[s] * (ys[s] - ybar) * (ys[s] - ybar);
  }

  Explanation ex;
  ex.target_class = target_class;
  if (ss_tot < 1e-18) {
    std::fprintf(stderr,
                 "warning: lime_explain: predictor is constant over the sampled masks; "
                 "all token weights are zero\n");
    ex.fidelity = 1.0;  // the constant surrogate is a perfect fit
  } else {
    ex.fidelity = 1.0 - ss_res / ss_tot;
  }
  for (std::size_t j = 0; j < T; ++j) ex.attributions.push_back({distinct[j], beta[j]});
  sort_by_magnitude(ex.attributions);
  return ex;
}

std::vector<std::string> shapley_player_names() {
  std::vector<std::string> names = {"emotion", "topic"};
  auto all = features::tabular_feature_names();
  for (std::size_t i = features::kEmotionDim + features::kTopicDim; i < features::kTabularDim; ++i)
    names.push_back(all[i]);
  return names;
}

std::vector<std::pair<std::size_t, std::size_t>> shapley_player_spans() {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.emplace_back(0, features::kEmotionDim);
  spans.emplace_back(features::kEmotionDim, features::kEmotionDim + features::kTopicDim);
  for (std::size_t k = 0; k < features::kUserDim; ++k) {
    std::size_t at = features::kEmotionDim + features::kTopicDim + k;
    spans.emplace_back(at, at + 1);
  }
  return spans;
}

Explanation shapley_tabular(const TabularPredictor& f, const std::vector<double>& x_tabular,
                            const std::vector<double>& background, int target_class) {
  if (x_tabular.size() != features::kTabularDim || background.size() != features::kTabularDim)
    throw std::runtime_error("shapley_tabular: tabular vectors must have 46 entries");
  const auto spans = shapley_player_spans();
  const auto names = shapley_player_names();

  // Value of every coalition, exactly once each.
  const std::size_t n_coalitions = std::size_t(1) << kPlayers;
  std::vector<double> value(n_coalitions);
  std::vector<double> blended(features::kTabularDim);
  for (std::size_t mask = 0; mask < n_coalitions; ++mask) {
    blended = background;
    for (std::size_t p = 0; p < kPlayers; ++p)
      if (mask & (std::size_t(1) << p))
        for (std::size_t i = spans[p].first; i < spans[p].second; ++i) blended[i] = x_tabular[i];
    value[mask] = f(blended);
  }

  // w(s) = s! (n-1-s)! / n! — the exact Shapley coalition weights.
  double fact[kPlayers + 1];
  fact[0] = 1.0;
  for (std::size_t i = 1; i <= kPlayers; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
  double coef[kPlayers];
  for (std::size_t s = 0; s < kPlayers; ++s)
    coef[s] = fact[s] * fact[kPlayers - 1 - s] / fact[kPlayers];

  Explanation ex;
  ex.target_class = target_class;
  ex.baseline_value = value[0];
  for (std::size_t p = 0; p < kPlayers; ++p) {
    const std::size_t bit = std::size_t(1) << p;
    // Marginal contributions bucketed by coalition size before the weighted
    // combination: symmetric players then sum identical per-size totals, so
    // the symmetry and null-player axioms hold to the last bit.
    double by_size[kPlayers] = {0.0};
    for (std::size_t mask = 0; mask < n_coalitions; ++mask) {
      if (mask & bit) continue;
      by_size[std::popcount(mask)] += value[mask | bit] - value[mask];
    }
    double phi = 0.0;
    for (std::size_t s = 0; s < kPlayers; ++s) phi += coef[s] * by_size[s];
    ex.attributions.push_back({names[p], phi});
  }
  sort_by_magnitude(ex.attributions);
  return ex;
}

ShapleySummary shapley_summary(const IndexedTabularPredictor& f,
                               const std::vector<std::vector<double>>& dataset,
                               std::size_t max_instances, std::uint64_t seed) {
  if (dataset.size() < 10)
    throw std::runtime_error("shapley_summary: need at least 10 instances");

  ShapleySummary summary;
  summary.background.assign(features::kTabularDim, 0.0);
  for (const auto& row : dataset) {
    if (row.size() != features::kTabularDim)
      throw std::runtime_error("shapley_summary: tabular rows must have 46 entries");
    for (std::size_t i = 0; i < row.size(); ++i) summary.background[i] += row[i];
  }
  for (double& v : summary.background) v /= static_cast<double>(dataset.size());

  std::vector<std::size_t> ids(dataset.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  if (max_instances > 0 && dataset.size() > max_instances) {
    Rng rng(stage_seed(seed, "explain/shap-sample"));
    rng.shuffle(ids);
    ids.resize(max_instances);
    std::sort(ids.begin(), ids.end());
  }
  summary.instance_ids = ids;

  const auto names = shapley_player_names();
  summary.players.resize(kPlayers);
  for (std::size_t p = 0; p < kPlayers; ++p) summary.players[p].name = names[p];

  for (std::size_t id : ids) {
    auto ex = shapley_tabular([&](const std::vector<double>& t) { return f(id, t); },
                              dataset[id], summary.background);
    for (const auto& attr : ex.attributions) {
      for (auto& player : summary.players) {
        if (player.name == attr.name) {
          player.per_instance.push_back(attr.weight);
          player.mean_abs_weight += std::fabs(attr.weight);
          break;
        }
      }
    }
  }
  for (auto& player : summary.players)
    player.mean_abs_weight /= static_cast<double>(ids.size());
  std::stable_sort(summary.players.begin(), summary.players.end(),
                   [](const PlayerSummary& a, const PlayerSummary& b) {
                     return a.mean_abs_weight > b.mean_abs_weight;
                   });
  return summary;
}

}  // namespace bullyrank::explain
