#pragma once

// Model input assembly: the 46-value tabular vector (12 emotion, 25 topic,
// 9 user) and the 100-slot token-id sequence.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bullyrank/affect.hpp"
#include "bullyrank/corpus.hpp"
#include "bullyrank/embeddings.hpp"
#include "bullyrank/textprep.hpp"

namespace bullyrank::features {

inline constexpr std::size_t kEmotionDim = 12;
inline constexpr std::size_t kTopicDim = 25;
inline constexpr std::size_t kUserDim = 9;
inline constexpr std::size_t kTabularDim = kEmotionDim + kTopicDim + kUserDim;  // 46
inline constexpr std::size_t kSequenceLen = 100;

struct UserFeatureBlock {
  double age_norm = 0.0;            // age / 18, clipped to [0,1]
  double gender_female = 0.0;
  double race_nonwhite = 0.0;
  double ethnicity_hispanic = 0.0;
  double history_recency = 0.0;     // none 0, >2mo 1/3, 1-2mo 2/3, <=1mo 1
  double internet_level = 0.0;      // four usage tiers -> 0, 1/3, 2/3, 1
  double internalizing = 0.0;       // fraction of the three internal flags
  double disciplinary = 0.0;
  double substance = 0.0;

  std::array<double, kUserDim> to_array() const {
    return {age_norm,       gender_female,  race_nonwhite,
            ethnicity_hispanic, history_recency, internet_level,
            internalizing,  disciplinary,   substance};
  }
  static const std::array<const char*, kUserDim>& names();
};

struct FeatureVector {
  std::vector<double> tabular;         // exactly 46, emotion | topic | user
  std::vector<std::uint32_t> sequence; // exactly 100 token ids, PAD = 0, OOV = 1
};

UserFeatureBlock encode_user(const corpus::UserProfile& profile);

// Token ids in message order, post-padded with PAD or post-truncated to the
// fixed length.
std::vector<std::uint32_t> encode_sequence(const textprep::TokenizedText& text,
                                           const embeddings::EmbeddingMatrix& vocab);

// Concatenates the blocks; throws on any dimension mismatch, naming the block.
FeatureVector assemble(const affect::EmotionFeatures& emotion,
                       const std::vector<double>& topic, const UserFeatureBlock& user,
                       const std::vector<std::uint32_t>& sequence);

// The 46 tabular names in assembly order (emotion, topic_00.., user fields).
std::vector<std::string> tabular_feature_names();

}  // namespace bullyrank::features
