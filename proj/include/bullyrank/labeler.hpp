#pragma once

// Intensity scoring and severity labeling: per-message total score
// (polarity + semantic + vulnerability), corpus min-max normalization to the
// bullying-intensity value BI, and the three-class severity assignment.

#include <cstdint>
#include <string>
#include <vector>

#include "bullyrank/affect.hpp"
#include "bullyrank/corpus.hpp"
#include "bullyrank/semantics.hpp"
#include "bullyrank/textprep.hpp"
#include "bullyrank/vulnerability.hpp"

namespace bullyrank::labeler {

enum class SeverityLabel { NotBullying, MildBullying, SevereBullying };

std::string to_string(SeverityLabel label);
SeverityLabel severity_from_string(const std::string& s);

struct ScoreBreakdown {
  double ps = 0.0;
  double ss = 0.0;
  double vf = 0.0;
  double s_total = 0.0;
  double bi = 0.0;
  SeverityLabel label = SeverityLabel::NotBullying;
};

struct NormStats {
  double min = 0.0;
  double max = 0.0;
};

// ps + ss + vf; every input must sit in [0,1].
double total_score(double ps, double ss, double vf);

// Corpus extremes of s_total. Throws on an empty list.
NormStats fit_norm(const std::vector<double>& scores);

// (s_total - min) / (max - min), clipped to [0,1]; 0 when max == min.
double intensity(double s_total, const NormStats& stats);

// Thirds of the unit interval: [0,1/3) not, [1/3,2/3) mild, [2/3,1] severe.
// Throws when bi is outside [0,1].
SeverityLabel classify(double bi);

// Everything needed to score one message: sentiment lexicons, the expanded
// keyword set with its calibration maximum, and the vulnerability weights.
struct CalibratedScorer {
  affect::Lexicons lexicons;
  semantics::KeywordSet keywords;
  double corpus_max = 0.0;
  vulnerability::VulnerabilityWeights weights{};
};

struct CalibrationConfig {
  std::size_t lsi_rank = semantics::kDefaultRank;
  double tau = semantics::kDefaultTau;
  // The SVD pass runs on deduplicated documents, down-sampled to this many
  // when the corpus is larger; the calibration maximum still scans everything.
  std::size_t max_lsi_docs = 500;
  std::uint64_t seed = 0;
  vulnerability::VulnerabilityWeights weights{};
  std::string data_dir;  // seed lexicon location; empty = bundled default
};

// Builds the LSI space from the corpus messages, expands the bundled seed
// lexicon, and fixes the hit-density maximum.
CalibratedScorer calibrate(const std::vector<corpus::UserRecord>& records,
                           const textprep::StopList& stops, const CalibrationConfig& cfg = {});

struct RawScore {
  double ps = 0.0, ss = 0.0, vf = 0.0, s_total = 0.0;
};

RawScore score_message(const std::string& text, const corpus::UserProfile& profile,
                       const CalibratedScorer& scorer, const textprep::StopList& stops);

struct LabeledMessage {
  std::string user_id;
  std::size_t message_index = 0;  // position in the user's message list
  ScoreBreakdown score;
};

// Scores every message, fits the normalization over all totals, then assigns
// BI and labels. `stats_out`, when given, receives the fitted extremes.
std::vector<LabeledMessage> label_corpus(const std::vector<corpus::UserRecord>& records,
                                         const CalibratedScorer& scorer,
                                         const textprep::StopList& stops,
                                         NormStats* stats_out = nullptr);

}  // namespace bullyrank::labeler
