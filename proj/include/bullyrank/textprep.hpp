#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace bullyrank::textprep {

// Output of the preprocessing chain. `tokens` are lowercase, stemmed, free of
// stop words, URLs and pure numerals. Elongation stats from the pre-collapse
// text are retained for the word-level emotion features.
struct TokenizedText {
  std::string raw;
  std::vector<std::string> tokens;
  std::size_t n_raw_words = 0;    // whitespace-delimited words after clean()
  std::size_t n_elongated = 0;    // words containing a letter repeated 3+ times

  bool operator==(const TokenizedText&) const = default;
};

// Stop list + contraction table, loaded once from the bundled data files and
// shared immutably afterwards.
class StopList {
 public:
  static StopList load(const std::string& data_dir = "");

  bool contains(const std::string& token) const { return stops_.count(token) > 0; }
  const std::unordered_map<std::string, std::string>& contractions() const {
    return contractions_;
  }
  std::size_t size() const { return stops_.size(); }

 private:
  std::unordered_set<std::string> stops_;
  std::unordered_map<std::string, std::string> contractions_;
};

// Strips HTML tags, URLs, user handles, standalone numerals and control
// characters; collapses runs of whitespace.
std::string clean(const std::string& text);

// Original Porter algorithm. Words of length <= 2 are returned unchanged.
std::string porter_stem(const std::string& word);

// clean -> lowercase -> expand contractions -> split on non-alphanumerics ->
// drop numerals and stop words -> collapse elongations -> stem.
TokenizedText preprocess(const std::string& text, const StopList& stops);

std::string to_lower(const std::string& s);

}  // namespace bullyrank::textprep
