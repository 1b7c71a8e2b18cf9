#include "bullyrank/affect.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bullyrank/paths.hpp"

namespace bullyrank::affect {

namespace {

constexpr double kCapsIncrement = 0.733;
constexpr double kNegationScalar = -0.74;
constexpr double kExclaimIncrement = 0.292;
constexpr int kExclaimCap = 3;
constexpr double kAlpha = 15.0;
constexpr int kLookback = 3;

void load_tsv(const std::string& path, std::unordered_map<std::string, double>& out) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    out[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
  }
  if (out.empty()) throw std::runtime_error("empty lexicon: " + path);
}

void load_list(const std::string& path, std::unordered_set<std::string>& out, bool stem) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    out.insert(stem ? textprep::porter_stem(line) : line);
  }
  if (out.empty()) throw std::runtime_error("empty lexicon: " + path);
}

struct RawToken {
  std::string lower;   // stripped of outer punctuation, lowercased
  bool all_caps = false;
};

std::vector<RawToken> sentiment_tokens(const std::string& text) {
  std::vector<RawToken> out;
  std::istringstream words(text);
  std::string w;
  while (words >> w) {
    std::size_t b = 0, e = w.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(w[b])) && w[b] != '\'') ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(w[e - 1])) && w[e - 1] != '\'') --e;
    if (b >= e) continue;
    RawToken t;
    bool has_alpha = false, all_upper = true;
    for (std::size_t i = b; i < e; ++i) {
      unsigned char c = static_cast<unsigned char>(w[i]);
      if (std::isalpha(c)) {
        has_alpha = true;
        if (!std::isupper(c)) all_upper = false;
      }
      t.lower += static_cast<char>(std::tolower(c));
    }
    t.all_caps = has_alpha && all_upper;
    out.push_back(std::move(t));
  }
  return out;
}

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

const std::array<const char*, 12>& EmotionFeatures::names() {
  static const std::array<const char*, 12> n = {
      "sent_neg",          "sent_neu",          "sent_pos",   "sent_compound",
      "frac_negative_lex", "frac_positive_lex", "frac_swear", "frac_anger",
      "neg_word_density",  "exclamation_density", "uppercase_ratio",
      "elongation_ratio"};
  return n;
}

Lexicons Lexicons::load(const std::string& data_dir) {
  std::string dir = resolve_data_dir(data_dir);
  Lexicons lex;
  load_tsv(data_file(dir, "valence.txt"), lex.valence_);
  load_tsv(data_file(dir, "boosters.txt"), lex.boosters_);
  load_list(data_file(dir, "negations.txt"), lex.negations_, false);
  load_list(data_file(dir, "swear.txt"), lex.swear_stems_, true);
  load_list(data_file(dir, "anger.txt"), lex.anger_stems_, true);
  for (const auto& [word, v] : lex.valence_) {
    if (v < 0) lex.neg_stems_.insert(textprep::porter_stem(word));
    else if (v > 0) lex.pos_stems_.insert(textprep::porter_stem(word));
  }
  return lex;
}

double Lexicons::valence(const std::string& lower_token) const {
  auto it = valence_.find(lower_token);
  return it == valence_.end() ? 0.0 : it->second;
}

double Lexicons::booster_scalar(const std::string& lower_token) const {
  auto it = boosters_.find(lower_token);
  return it == boosters_.end() ? 0.0 : it->second;
}

SentimentScores score_sentiment(const std::string& text, const Lexicons& lex) {
  auto tokens = sentiment_tokens(text);
  if (tokens.empty()) return {};

  bool has_caps = false, has_lower = false;
  for (const auto& t : tokens) {
    bool alpha = false;
    for (char c : t.lower)
      if (std::isalpha(static_cast<unsigned char>(c))) alpha = true;
    if (!alpha) continue;
    (t.all_caps ? has_caps : has_lower) = true;
  }
  const bool cap_diff = has_caps && has_lower;

  double total = 0.0, pos_mass = 0.0, neg_mass = 0.0;
  std::size_t neu_count = 0;

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (lex.is_booster(tok.lower) || lex.is_negation(tok.lower)) {
      ++neu_count;
      continue;
    }
    double v = lex.valence(tok.lower);
    if (v == 0.0) {
      ++neu_count;
      continue;
    }
    if (tok.all_caps && cap_diff) v += sign(v) * kCapsIncrement;

    bool negated = false;
    for (int back = 1; back <= kLookback && back <= static_cast<int>(i); ++back) {
      const auto& prev = tokens[i - static_cast<std::size_t>(back)];
      double b = lex.booster_scalar(prev.lower);
      if (b != 0.0) v += sign(v) * b;
      if (lex.is_negation(prev.lower)) negated = true;
    }
    if (negated) v *= kNegationScalar;

    total += v;
    if (v > 0) pos_mass += v + 1.0;
    else neg_mass += -v + 1.0;
  }

  std::size_t excl = 0;
  for (char c : text)
    if (c == '!') ++excl;
  double amp = static_cast<double>(std::min<std::size_t>(excl, kExclaimCap)) * kExclaimIncrement;
  if (total > 0) {
    total += amp;
    pos_mass += amp;
  } else if (total < 0) {
    total -= amp;
    neg_mass += amp;
  }

  SentimentScores s;
  s.compound = total / std::sqrt(total * total + kAlpha);
  if (s.compound > 1.0) s.compound = 1.0;
  if (s.compound < -1.0) s.compound = -1.0;

  double denom = pos_mass + neg_mass + static_cast<double>(neu_count);
  if (denom <= 0.0) return {};  // nothing scored: neutral
  s.pos = pos_mass / denom;
  s.neg = neg_mass / denom;
  s.neu = static_cast<double>(neu_count) / denom;
  return s;
}

double polarity_score(const SentimentScores& s) { return (1.0 - s.compound) / 2.0; }

EmotionFeatures emotion_features(const std::string& text,
                                 const textprep::TokenizedText& tokens,
                                 const Lexicons& lex) {
  EmotionFeatures f;
  auto s = score_sentiment(text, lex);
  f.sent_neg = s.neg;
  f.sent_neu = s.neu;
  f.sent_pos = s.pos;
  f.sent_compound = s.compound;

  const double n_tok = static_cast<double>(tokens.tokens.size());
  std::size_t negc = 0, posc = 0, swearc = 0, angerc = 0;
  for (const auto& t : tokens.tokens) {
    if (lex.negative_stem(t)) ++negc;
    if (lex.positive_stem(t)) ++posc;
    if (lex.swear_stem(t)) ++swearc;
    if (lex.anger_stem(t)) ++angerc;
  }
  if (n_tok > 0) {
    f.frac_negative_lex = negc / n_tok;
    f.frac_positive_lex = posc / n_tok;
    f.frac_swear = swearc / n_tok;
    f.frac_anger = angerc / n_tok;
  }

  if (tokens.n_raw_words > 0) {
    f.neg_word_density =
        std::min(1.0, static_cast<double>(negc) / static_cast<double>(tokens.n_raw_words));
    f.elongation_ratio = std::min(
        1.0, static_cast<double>(tokens.n_elongated) / static_cast<double>(tokens.n_raw_words));
  }

  if (!text.empty()) {
    std::size_t excl = 0, alpha = 0, upper = 0;
    for (char c : text) {
      unsigned char u = static_cast<unsigned char>(c);
      if (c == '!') ++excl;
      if (std::isalpha(u)) {
        ++alpha;
        if (std::isupper(u)) ++upper;
      }
    }
    f.exclamation_density =
        std::min(1.0, static_cast<double>(excl) / static_cast<double>(text.size()));
    if (alpha > 0)
      f.uppercase_ratio = static_cast<double>(upper) / static_cast<double>(alpha);
  }
  return f;
}

}  // namespace bullyrank::affect
