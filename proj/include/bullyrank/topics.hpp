#pragma once

// Topic features: latent Dirichlet allocation trained by collapsed Gibbs
// sampling, with seeded fold-in inference for new messages.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bullyrank/textprep.hpp"

namespace bullyrank::topics {

struct LdaConfig {
  std::size_t n_topics = 25;
  double alpha = 2.0;  // 50 / n_topics
  double beta = 0.01;
  std::size_t train_sweeps = 500;
  std::size_t infer_sweeps = 50;
  std::size_t min_posts = 10;  // vocabulary document-frequency floor
};

struct LdaModel {
  LdaConfig cfg;
  std::uint64_t seed = 0;
  std::vector<std::string> terms;                 // index -> term, sorted
  std::map<std::string, std::size_t> vocabulary;  // term -> index
  // n_topics x |V| assignment counts from the final training sweep
  std::vector<std::vector<std::uint32_t>> topic_word_counts;
  std::vector<std::uint64_t> topic_totals;  // per-topic count sums
};

// Collapsed Gibbs over the document collection. Tokens outside the
// document-frequency floor are dropped. Deterministic under (cfg, seed).
// Throws when fewer than 2 documents remain or the floor empties the
// vocabulary (the message names the threshold).
LdaModel fit_lda(const std::vector<textprep::TokenizedText>& docs, const LdaConfig& cfg,
                 std::uint64_t seed);

// Fold-in Gibbs (cfg.infer_sweeps sweeps) holding the trained counts fixed.
// The generator is derived from the model seed and the document's tokens, so
// equal documents always infer identically. Returns a distribution over
// topics; documents with no in-vocabulary tokens get the uniform vector.
std::vector<double> infer_topics(const LdaModel& model, const textprep::TokenizedText& doc);

// Highest-count words per topic, for inspection dumps.
std::vector<std::vector<std::string>> top_words(const LdaModel& model, std::size_t n = 10);

void save_lda(const LdaModel& model, const std::string& path);
LdaModel load_lda(const std::string& path);

}  // namespace bullyrank::topics
