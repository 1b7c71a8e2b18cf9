#include "bullyrank/labeler.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "bullyrank/rng.hpp"

namespace bullyrank::labeler {

std::string to_string(SeverityLabel label) {
  switch (label) {
    case SeverityLabel::NotBullying: return "not_bullying";
    case SeverityLabel::MildBullying: return "mild_bullying";
    default: return "severe_bullying";
  }
}

SeverityLabel severity_from_string(const std::string& s) {
  if (s == "not_bullying") return SeverityLabel::NotBullying;
  if (s == "mild_bullying") return SeverityLabel::MildBullying;
  if (s == "severe_bullying") return SeverityLabel::SevereBullying;
  throw std::runtime_error("unknown severity label: \"" + s + "\"");
}

double total_score(double ps, double ss, double vf) {
  for (double v : {ps, ss, vf})
    if (!(v >= 0.0 && v <= 1.0))
      throw std::runtime_error("total_score: component outside [0,1]");
  return ps + ss + vf;
}

NormStats fit_norm(const std::vector<double>& scores) {
  if (scores.empty()) throw std::runtime_error("fit_norm: empty score list");
  NormStats st{scores[0], scores[0]};
  for (double s : scores) {
    st.min = std::min(st.min, s);
    st.max = std::max(st.max, s);
  }
  return st;
}

double intensity(double s_total, const NormStats& stats) {
  if (stats.max <= stats.min) return 0.0;
  double bi = (s_total - stats.min) / (stats.max - stats.min);
  return std::clamp(bi, 0.0, 1.0);
}

SeverityLabel classify(double bi) {
  if (!(bi >= 0.0 && bi <= 1.0))
    throw std::runtime_error("classify: intensity outside [0,1]");
  if (bi >= 2.0 / 3.0) return SeverityLabel::SevereBullying;
  if (bi >= 1.0 / 3.0) return SeverityLabel::MildBullying;
  return SeverityLabel::NotBullying;
}

CalibratedScorer calibrate(const std::vector<corpus::UserRecord>& records,
                           const textprep::StopList& stops, const CalibrationConfig& cfg) {
  CalibratedScorer scorer;
  scorer.lexicons = affect::Lexicons::load(cfg.data_dir);
  scorer.weights = cfg.weights;

  std::vector<textprep::TokenizedText> docs;
  for (const auto& r : records)
    for (const auto& m : r.messages) {
      auto t = textprep::preprocess(m.text, stops);
      if (!t.tokens.empty()) docs.push_back(std::move(t));
    }
  if (docs.size() < 2)
    throw std::runtime_error("calibrate: corpus has fewer than 2 non-empty messages");

  // SVD pass on distinct documents only, capped for tractability.
  std::vector<textprep::TokenizedText> distinct;
  {
    std::map<std::string, bool> seen;
    for (const auto& d : docs) {
      std::string key;
      for (const auto& t : d.tokens) {
        key += t;
        key += ' ';
      }
      if (!seen[key]) {
        seen[key] = true;
        distinct.push_back(d);
      }
    }
  }
  if (distinct.size() > cfg.max_lsi_docs) {
    Rng rng(stage_seed(cfg.seed, "calibrate/lsi-sample"));
    rng.shuffle(distinct);
    distinct.resize(cfg.max_lsi_docs);
  }
  if (distinct.size() < 2) distinct = docs;  // all messages identical

  auto model = semantics::build_lsi(distinct, cfg.lsi_rank);
  auto seeds = semantics::load_seed_terms(cfg.data_dir);
  scorer.keywords = semantics::expand_keywords(model, seeds, cfg.tau);
  scorer.corpus_max = semantics::corpus_max_density(docs, scorer.keywords);
  return scorer;
}

RawScore score_message(const std::string& text, const corpus::UserProfile& profile,
                       const CalibratedScorer& scorer, const textprep::StopList& stops) {
  RawScore out;
  out.ps = affect::polarity_score(affect::score_sentiment(text, scorer.lexicons));
  out.ss = semantics::semantic_score(textprep::preprocess(text, stops), scorer.keywords,
                                     scorer.corpus_max);
  out.vf = vulnerability::vf(profile, scorer.weights);
  out.s_total = total_score(out.ps, out.ss, out.vf);
  return out;
}

std::vector<LabeledMessage> label_corpus(const std::vector<corpus::UserRecord>& records,
                                         const CalibratedScorer& scorer,
                                         const textprep::StopList& stops, NormStats* stats_out) {
  std::vector<LabeledMessage> out;
  std::vector<double> totals;
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.messages.size(); ++i) {
      LabeledMessage lm;
      lm.user_id = r.profile.user_id;
      lm.message_index = i;
      RawScore raw = score_message(r.messages[i].text, r.profile, scorer, stops);
      lm.score.ps = raw.ps;
      lm.score.ss = raw.ss;
      lm.score.vf = raw.vf;
      lm.score.s_total = raw.s_total;
      out.push_back(std::move(lm));
      totals.push_back(raw.s_total);
    }
  }
  if (totals.empty()) return out;
  NormStats stats = fit_norm(totals);
  if (stats_out) *stats_out = stats;
  for (auto& lm : out) {
    lm.score.bi = intensity(lm.score.s_total, stats);
    lm.score.label = classify(lm.score.bi);
  }
  return out;
}

}  // namespace bullyrank::labeler
