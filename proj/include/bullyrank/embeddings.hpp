#pragma once

// Word embeddings: continuous bag-of-words with negative sampling, trained on
// the message corpus, feeding the network's embedding layer.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bullyrank/textprep.hpp"

namespace bullyrank::embeddings {

inline constexpr std::size_t kPadIndex = 0;
inline constexpr std::size_t kOovIndex = 1;

struct CbowConfig {
  std::size_t dim = 100;
  std::size_t window = 5;  // context positions each side
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double lr = 0.025;  // decays linearly over all processed positions
};

struct EmbeddingMatrix {
  std::map<std::string, std::size_t> vocabulary;  // term -> row index (>= 2)
  std::vector<std::string> terms;                 // row index - 2 -> term
  std::vector<std::vector<double>> vectors;       // (|V|+2) x dim; row 0 = PAD, all zeros
  std::size_t dim = 0;
  std::size_t window = 0;

  // PAD stays 0 and never comes from a token; unknown tokens share row 1.
  std::size_t row_for(const std::string& term) const {
    auto it = vocabulary.find(term);
    return it == vocabulary.end() ? kOovIndex : it->second;
  }
};

struct TrainStats {
  std::vector<double> epoch_loss;  // mean negative-sampling loss per epoch
};

// Deterministic under seed: fixed document traversal, fixed negative-sampling
// stream. Negatives drawn from the unigram^0.75 distribution. Throws on a
// corpus with no tokens.
EmbeddingMatrix train_cbow(const std::vector<textprep::TokenizedText>& docs,
                           const CbowConfig& cfg, std::uint64_t seed,
                           TrainStats* stats = nullptr);

struct SimilarityResult {
  double cosine = 0.0;
  bool a_oov = false;
  bool b_oov = false;
};

// Cosine of the two term vectors; unknown terms fall back to the OOV row and
// are flagged.
SimilarityResult similarity(const EmbeddingMatrix& m, const std::string& a,
                            const std::string& b);

void save_embeddings(const EmbeddingMatrix& m, const std::string& path);
EmbeddingMatrix load_embeddings(const std::string& path);

// One line per term: the term then its vector components.
void export_text(const EmbeddingMatrix& m, const std::string& path);

}  // namespace bullyrank::embeddings
