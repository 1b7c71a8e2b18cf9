#include "bullyrank/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace bullyrank::features {

const std::array<const char*, kUserDim>& UserFeatureBlock::names() {
  static const std::array<const char*, kUserDim> n = {
      "user_age_norm",       "user_gender_female",  "user_race_nonwhite",
      "user_ethnicity_hispanic", "user_history_recency", "user_internet_level",
      "user_internalizing",  "user_disciplinary",   "user_substance"};
  return n;
}

UserFeatureBlock encode_user(const corpus::UserProfile& p) {
  using corpus::BullyingHistory;
  using corpus::InternetUse;

  UserFeatureBlock b;
  b.age_norm = std::clamp(double(p.age) / 18.0, 0.0, 1.0);
  b.gender_female = p.gender == corpus::Gender::female ? 1.0 : 0.0;
  b.race_nonwhite = p.race == corpus::Race::nonwhite ? 1.0 : 0.0;
  b.ethnicity_hispanic = p.ethnicity == corpus::Ethnicity::hispanic_latino ? 1.0 : 0.0;
  switch (p.bullying_history) {
    case BullyingHistory::none: b.history_recency = 0.0; break;
    case BullyingHistory::more_than_two_months: b.history_recency = 1.0 / 3.0; break;
    case BullyingHistory::one_to_two_months: b.history_recency = 2.0 / 3.0; break;
    case BullyingHistory::within_1_month: b.history_recency = 1.0; break;
  }
  switch (p.internet_use) {
    case InternetUse::lt_1h_weekly: b.internet_level = 0.0; break;
    case InternetUse::lt_4h_daily: b.internet_level = 1.0 / 3.0; break;
    case InternetUse::four_to_six_h_daily: b.internet_level = 2.0 / 3.0; break;
    case InternetUse::gt_6h_daily: b.internet_level = 1.0; break;
  }
  b.internalizing = (double(p.depression) + double(p.anxiety) + double(p.self_esteem_issues)) / 3.0;
  b.disciplinary = p.disciplinary_issues ? 1.0 : 0.0;
  b.substance = p.substance_abuse ? 1.0 : 0.0;
  return b;
}

std::vector<std::uint32_t> encode_sequence(const textprep::TokenizedText& text,
                                           const embeddings::EmbeddingMatrix& vocab) {
  std::vector<std::uint32_t> ids;
  ids.reserve(kSequenceLen);
  for (const auto& t : text.tokens) {
    if (ids.size() == kSequenceLen) break;  // post-truncation: keep the first 100
    ids.push_back(static_cast<std::uint32_t>(vocab.row_for(t)));
  }
  ids.resize(kSequenceLen, static_cast<std::uint32_t>(embeddings::kPadIndex));
  return ids;
}

FeatureVector assemble(const affect::EmotionFeatures& emotion, const std::vector<double>& topic,
                       const UserFeatureBlock& user, const std::vector<std::uint32_t>& sequence) {
  if (topic.size() != kTopicDim)
    throw std::runtime_error("assemble: topic block must have " + std::to_string(kTopicDim) +
                             " entries, got " + std::to_string(topic.size()));
  if (sequence.size() != kSequenceLen)
    throw std::runtime_error("assemble: sequence block must have " +
                             std::to_string(kSequenceLen) + " ids, got " +
                             std::to_string(sequence.size()));
  FeatureVector fv;
  fv.tabular.reserve(kTabularDim);
  for (double v : emotion.to_array()) fv.tabular.push_back(v);
  for (double v : topic) fv.tabular.push_back(v);
  for (double v : user.to_array()) fv.tabular.push_back(v);
  fv.sequence = sequence;
  return fv;
}

std::vector<std::string> tabular_feature_names() {
  std::vector<std::string> names;
  names.reserve(kTabularDim);
  for (const char* n : affect::EmotionFeatures::names()) names.emplace_back(n);
  for (std::size_t k = 0; k < kTopicDim; ++k) {
    std::string n = "topic_";
    if (k < 10) n += '0';
    n += std::to_string(k);
    names.push_back(n);
  }
  for (const char* n : UserFeatureBlock::names()) names.emplace_back(n);
  return names;
}

}  // namespace bullyrank::features
