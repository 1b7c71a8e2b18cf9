#pragma once

// Latent semantic indexing over the message corpus: TF-IDF + truncated SVD,
// expansion of the seed bullying lexicon by cosine similarity, and the
// per-message semantic score SS.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bullyrank/textprep.hpp"

namespace bullyrank::semantics {

inline constexpr std::size_t kDefaultRank = 50;
inline constexpr double kDefaultTau = 0.4;

// Stemmed term -> weight in (0,1]. Seed terms always carry weight 1.
struct KeywordSet {
  std::map<std::string, double> entries;
};

struct LsiModel {
  std::vector<std::string> terms;                 // row index -> term, sorted
  std::map<std::string, std::size_t> vocabulary;  // term -> row index
  std::vector<double> idf;                        // per term, smoothed
  std::vector<double> singular_values;            // length k, non-increasing
  std::vector<std::vector<double>> term_vectors;  // |V| x k, rows of U·Σ
  std::size_t k = 0;
};

// TF-IDF term-document matrix (raw counts x smoothed idf) factorized by
// truncated SVD; k is clamped to the numerical rank. Deterministic: signs are
// canonicalized so each singular vector's max-magnitude entry is positive.
// Throws on fewer than 2 documents or fewer than 2 distinct terms.
LsiModel build_lsi(const std::vector<textprep::TokenizedText>& docs,
                   std::size_t k = kDefaultRank);

// Folds a token list into the k-dimensional document space (Σ⁻¹·Uᵀ·q).
std::vector<double> project_doc(const LsiModel& model, const std::vector<std::string>& tokens);

// Centroid of the in-vocabulary seed vectors; any vocabulary term whose cosine
// against it reaches tau joins with weight = cosine (clipped to (0,1]). All
// seeds join with weight 1. Throws, listing the misses, when no seed is in
// the vocabulary.
KeywordSet expand_keywords(const LsiModel& model, const std::vector<std::string>& seeds,
                           double tau = kDefaultTau);

// Bundled seed lexicon: one entry per line, '#' comments; entries are
// stemmed on load and multi-word entries contribute each token.
std::vector<std::string> load_seed_terms(const std::string& data_dir = "");

// H = Σ_{t ∈ tokens ∩ keys} w_t · count(t) / |tokens|; 0 for an empty list.
double raw_hit_density(const std::vector<std::string>& tokens, const KeywordSet& keys);

// Calibration pass: max raw hit density over the corpus.
double corpus_max_density(const std::vector<textprep::TokenizedText>& docs,
                          const KeywordSet& keys);

// SS = min(1, H / corpus_max); 0 when corpus_max is 0.
double semantic_score(const textprep::TokenizedText& text, const KeywordSet& keys,
                      double corpus_max);

}  // namespace bullyrank::semantics
