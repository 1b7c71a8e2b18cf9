#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bullyrank/textprep.hpp"

namespace bullyrank::explain {

struct Attribution {
  std::string name;
  double weight = 0.0;
};

struct Explanation {
  int target_class = 0;
  std::vector<Attribution> attributions;  // sorted by |weight| descending
  double fidelity = 0.0;                  // local surrogate weighted R-squared (LIME)
  double baseline_value = 0.0;            // f(background) (Shapley)
};

// A predictor over (tokens, tabular) returning the target-class probability.
// The caller binds the model, the sequence encoding and the class of interest.
using MixedPredictor =
    std::function<double(const std::vector<std::string>& tokens, const std::vector<double>& tabular)>;

// A predictor over the 46-d tabular block, sequence held fixed by the caller.
using TabularPredictor = std::function<double(const std::vector<double>& tabular)>;

// Local surrogate token attributions: sample token masks (each distinct token
// kept with probability 1/2), weight samples by a cosine-distance kernel
// exp(-d^2 / 0.25^2), and fit a weighted ridge regression (lambda = 1) from
// mask vectors to the predicted probability. Coefficients are the weights.
Explanation lime_explain(const MixedPredictor& f, const textprep::TokenizedText& text,
                         const std::vector<double>& fixed_tabular, std::size_t n_samples = 500,
                         std::uint64_t seed = 0, int target_class = 0);

// The eleven Shapley players: the emotion block, the topic block, and the
// nine individual user fields.
std::vector<std::string> shapley_player_names();
std::vector<std::pair<std::size_t, std::size_t>> shapley_player_spans();  // [begin, end) indices

// Exact grouped Shapley values by full enumeration of the 2^11 coalitions;
// absent players take the background (dataset mean) values.
Explanation shapley_tabular(const TabularPredictor& f, const std::vector<double>& x_tabular,
                            const std::vector<double>& background, int target_class = 0);

struct PlayerSummary {
  std::string name;
  double mean_abs_weight = 0.0;
  std::vector<double> per_instance;  // one Shapley value per explained instance
};

struct ShapleySummary {
  std::vector<double> background;        // dataset mean tabular vector
  std::vector<PlayerSummary> players;    // ranked by mean |value| descending
  std::vector<std::size_t> instance_ids; // dataset rows that were explained
};

// Per-instance predictor: the first argument is the dataset row being
// explained, letting the caller hold that row's own sequence fixed.
using IndexedTabularPredictor =
    std::function<double(std::size_t instance, const std::vector<double>& tabular)>;

// Per-player Shapley distributions over a seeded sample of the dataset
// (background = mean of the full dataset).
ShapleySummary shapley_summary(const IndexedTabularPredictor& f,
                               const std::vector<std::vector<double>>& dataset,
                               std::size_t max_instances, std::uint64_t seed);

}  // namespace bullyrank::explain
