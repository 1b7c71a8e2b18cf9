#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bullyrank/textprep.hpp"

namespace bullyrank::affect {

// Sentence-level sentiment: neg/neu/pos are proportions summing to 1,
// compound is the normalized total valence in [-1, 1].
struct SentimentScores {
  double neg = 0.0;
  double neu = 1.0;
  double pos = 0.0;
  double compound = 0.0;
};

// The 12-d emotion block, in the fixed feature order used everywhere
// downstream (CSV headers, Shapley players, the tabular vector).
struct EmotionFeatures {
  double sent_neg = 0.0;
  double sent_neu = 1.0;
  double sent_pos = 0.0;
  double sent_compound = 0.0;
  double frac_negative_lex = 0.0;
  double frac_positive_lex = 0.0;
  double frac_swear = 0.0;
  double frac_anger = 0.0;
  double neg_word_density = 0.0;
  double exclamation_density = 0.0;
  double uppercase_ratio = 0.0;
  double elongation_ratio = 0.0;

  std::array<double, 12> to_array() const {
    return {sent_neg,          sent_neu,          sent_pos,   sent_compound,
            frac_negative_lex, frac_positive_lex, frac_swear, frac_anger,
            neg_word_density,  exclamation_density, uppercase_ratio,
            elongation_ratio};
  }
  static const std::array<const char*, 12>& names();
};

// Immutable bundle of the sentiment lexicons. Word-level categories are
// matched on Porter stems so they line up with preprocessed tokens.
class Lexicons {
 public:
  static Lexicons load(const std::string& data_dir = "");

  double valence(const std::string& lower_token) const;
  bool is_booster(const std::string& lower_token) const {
    return boosters_.count(lower_token) > 0;
  }
  double booster_scalar(const std::string& lower_token) const;
  bool is_negation(const std::string& lower_token) const {
    return negations_.count(lower_token) > 0;
  }

  bool negative_stem(const std::string& stem) const { return neg_stems_.count(stem) > 0; }
  bool positive_stem(const std::string& stem) const { return pos_stems_.count(stem) > 0; }
  bool swear_stem(const std::string& stem) const { return swear_stems_.count(stem) > 0; }
  bool anger_stem(const std::string& stem) const { return anger_stems_.count(stem) > 0; }

  std::size_t valence_size() const { return valence_.size(); }

 private:
  std::unordered_map<std::string, double> valence_;
  std::unordered_map<std::string, double> boosters_;
  std::unordered_set<std::string> negations_;
  std::unordered_set<std::string> neg_stems_;
  std::unordered_set<std::string> pos_stems_;
  std::unordered_set<std::string> swear_stems_;
  std::unordered_set<std::string> anger_stems_;
};

// Rule-based valence scoring over the raw text. Rules, applied per scored
// word over the 3 preceding tokens: negation flips the valence by -0.74;
// each booster shifts it 0.293 toward (or away from) its sign; an all-caps
// word amid mixed case gains 0.733 in its sign direction. Up to three
// trailing '!' amplify the total by 0.292 each. compound = S / sqrt(S^2+15).
SentimentScores score_sentiment(const std::string& text, const Lexicons& lex);

// PS in [0, 1]: negative sentiment scores high. PS = (1 - compound) / 2.
double polarity_score(const SentimentScores& s);

// Fills the 12-d block; `tokens` must be preprocess(text) output.
EmotionFeatures emotion_features(const std::string& text,
                                 const textprep::TokenizedText& tokens,
                                 const Lexicons& lex);

}  // namespace bullyrank::affect
