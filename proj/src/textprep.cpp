#include "bullyrank/textprep.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "bullyrank/paths.hpp"

namespace bullyrank::textprep {

namespace {

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || is_digit(c) || c == '\'';
}

// ---- Porter stemmer -------------------------------------------------------

bool consonant(const std::string& w, int i) {
  switch (w[static_cast<std::size_t>(i)]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !consonant(w, i - 1);
    default:
      return true;
  }
}

// m in the [C](VC)^m[V] decomposition.
int measure(const std::string& w) {
  int n = 0, i = 0;
  const int len = static_cast<int>(w.size());
  while (i < len && consonant(w, i)) ++i;
  while (i < len) {
    while (i < len && !consonant(w, i)) ++i;
    if (i >= len) break;
    ++n;
    while (i < len && consonant(w, i)) ++i;
  }
  return n;
}

bool has_vowel(const std::string& w) {
  for (int i = 0; i < static_cast<int>(w.size()); ++i)
    if (!consonant(w, i)) return true;
  return false;
}

bool ends_double_consonant(const std::string& w) {
  const int len = static_cast<int>(w.size());
  return len >= 2 && w[len - 1] == w[len - 2] && consonant(w, len - 1);
}

// *o: stem ends cvc where the final c is not w, x or y.
bool ends_cvc(const std::string& w) {
  const int len = static_cast<int>(w.size());
  if (len < 3) return false;
  if (!consonant(w, len - 3) || consonant(w, len - 2) || !consonant(w, len - 1))
    return false;
  char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const char* suf) {
  std::size_t n = std::char_traits<char>::length(suf);
  return w.size() >= n && w.compare(w.size() - n, n, suf) == 0;
}

struct Rule {
  const char* suffix;
  const char* replacement;
};

// Apply the longest matching rule in the block; the condition `min_m` is
// checked on the stem, and a failed condition ends the block without trying
// shorter suffixes.
bool apply_block(std::string& w, const Rule* rules, std::size_t n, int min_m) {
  for (std::size_t r = 0; r < n; ++r) {
    if (!ends_with(w, rules[r].suffix)) continue;
    std::string stem = w.substr(0, w.size() - std::char_traits<char>::length(rules[r].suffix));
    if (measure(stem) > min_m) w = stem + rules[r].replacement;
    return true;
  }
  return false;
}

}  // namespace

std::string porter_stem(const std::string& word) {
  if (word.size() <= 2) return word;
  std::string w = word;

  // Step 1a
  if (ends_with(w, "sses")) w.resize(w.size() - 2);
  else if (ends_with(w, "ies")) w.resize(w.size() - 2);
  else if (ends_with(w, "ss")) { /* keep */ }
  else if (ends_with(w, "s")) w.resize(w.size() - 1);

  // Step 1b
  bool cleanup = false;
  if (ends_with(w, "eed")) {
    std::string stem = w.substr(0, w.size() - 3);
    if (measure(stem) > 0) w.resize(w.size() - 1);
  } else if (ends_with(w, "ed") && has_vowel(w.substr(0, w.size() - 2))) {
    w.resize(w.size() - 2);
    cleanup = true;
  } else if (ends_with(w, "ing") && has_vowel(w.substr(0, w.size() - 3))) {
    w.resize(w.size() - 3);
    cleanup = true;
  }
  if (cleanup) {
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w += 'e';
    } else if (ends_double_consonant(w)) {
      char c = w.back();
      if (c != 'l' && c != 's' && c != 'z') w.pop_back();
    } else if (measure(w) == 1 && ends_cvc(w)) {
      w += 'e';
    }
  }

  // Step 1c
  if (ends_with(w, "y") && has_vowel(w.substr(0, w.size() - 1))) w.back() = 'i';

  // Step 2 (m > 0)
  static const Rule step2[] = {
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
      {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
      {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
      {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
      {"logi", "log"},
  };
  {
    // Longest match wins across the block.
    std::size_t best = SIZE_MAX, best_len = 0;
    for (std::size_t r = 0; r < std::size(step2); ++r) {
      std::size_t n = std::char_traits<char>::length(step2[r].suffix);
      if (n > best_len && ends_with(w, step2[r].suffix)) { best = r; best_len = n; }
    }
    if (best != SIZE_MAX) apply_block(w, &step2[best], 1, 0);
  }

  // Step 3 (m > 0)
  static const Rule step3[] = {
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""},
  };
  {
    std::size_t best = SIZE_MAX, best_len = 0;
    for (std::size_t r = 0; r < std::size(step3); ++r) {
      std::size_t n = std::char_traits<char>::length(step3[r].suffix);
      if (n > best_len && ends_with(w, step3[r].suffix)) { best = r; best_len = n; }
    }
    if (best != SIZE_MAX) apply_block(w, &step3[best], 1, 0);
  }

  // Step 4 (m > 1); "ion" additionally requires the stem to end in s or t.
  static const char* step4[] = {
      "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion",
      "ism",  "ate",  "iti",  "ous",  "ive",  "ize",  "al",  "er",  "ic", "ou",
  };
  {
    const char* best = nullptr;
    std::size_t best_len = 0;
    for (const char* suf : step4) {
      std::size_t n = std::char_traits<char>::length(suf);
      if (n > best_len && ends_with(w, suf)) { best = suf; best_len = n; }
    }
    if (best) {
      std::string stem = w.substr(0, w.size() - best_len);
      bool ok = measure(stem) > 1;
      if (ok && std::string(best) == "ion")
        ok = !stem.empty() && (stem.back() == 's' || stem.back() == 't');
      if (ok) w = stem;
    }
  }

  // Step 5a
  if (ends_with(w, "e")) {
    std::string stem = w.substr(0, w.size() - 1);
    int m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) w = stem;
  }
  // Step 5b
  if (measure(w) > 1 && ends_double_consonant(w) && w.back() == 'l') w.pop_back();

  return w;
}

// ---- cleaning -------------------------------------------------------------

std::string clean(const std::string& text) {
  std::string s;
  s.reserve(text.size());

  // Drop HTML tags and control characters in one pass.
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '<') {
      std::size_t close = text.find('>', i);
      if (close != std::string::npos) {
        i = close;
        s += ' ';
        continue;
      }
    }
    if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f)
      s += ' ';
    else
      s += c;
  }

  // Drop URL and @handle chunks.
  std::string t;
  t.reserve(s.size());
  std::istringstream chunks(s);
  std::string chunk;
  bool first = true;
  while (chunks >> chunk) {
    std::string low = to_lower(chunk);
    if (low.rfind("http://", 0) == 0 || low.rfind("https://", 0) == 0 ||
        low.rfind("www.", 0) == 0 || chunk[0] == '@')
      continue;
    if (!first) t += ' ';
    t += chunk;
    first = false;
  }

  // Remove standalone numeral runs (digits not adjacent to a letter).
  std::string u;
  u.reserve(t.size());
  for (std::size_t i = 0; i < t.size();) {
    if (is_digit(t[i])) {
      std::size_t j = i;
      while (j < t.size() && is_digit(t[j])) ++j;
      bool letter_before = i > 0 && is_ascii_letter(t[i - 1]);
      bool letter_after = j < t.size() && is_ascii_letter(t[j]);
      if (!letter_before && !letter_after) {
        i = j;
        continue;
      }
      u.append(t, i, j - i);
      i = j;
    } else {
      u += t[i++];
    }
  }

  // Collapse whitespace.
  std::string out;
  out.reserve(u.size());
  bool in_space = true;
  for (char c : u) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out += ' ';
      in_space = true;
    } else {
      out += c;
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string to_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// ---- stop list ------------------------------------------------------------

StopList StopList::load(const std::string& data_dir) {
  std::string dir = resolve_data_dir(data_dir);
  StopList sl;

  std::ifstream stops(data_file(dir, "stopwords.txt"));
  std::string line;
  while (std::getline(stops, line)) {
    if (line.empty() || line[0] == '#') continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) sl.stops_.insert(line);
  }
  if (sl.stops_.empty()) throw std::runtime_error("empty stop list");

  std::ifstream contr(data_file(dir, "contractions.txt"));
  while (std::getline(contr, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string value = line.substr(tab + 1);
    while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
    sl.contractions_[line.substr(0, tab)] = value;
  }
  return sl;
}

// ---- preprocess -----------------------------------------------------------

namespace {

// Collapse any letter repeated 3+ times down to 2; reports whether the word
// was elongated.
std::string collapse_elongation(const std::string& tok, bool* elongated) {
  std::string out;
  out.reserve(tok.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    if (i > 0 && tok[i] == tok[i - 1] && is_ascii_letter(tok[i]))
      ++run;
    else
      run = 0;
    if (run >= 3 - 1) {  // third repeat onwards
      *elongated = true;
      continue;
    }
    out += tok[i];
  }
  return out;
}

bool pure_numeral(const std::string& tok) {
  for (char c : tok)
    if (!is_digit(c)) return false;
  return !tok.empty();
}

}  // namespace

TokenizedText preprocess(const std::string& text, const StopList& stops) {
  TokenizedText out;
  out.raw = text;

  std::string lowered = to_lower(clean(text));

  {
    std::istringstream words(lowered);
    std::string w;
    while (words >> w) ++out.n_raw_words;
  }

  // Expand contractions on apostrophe-bearing word segments.
  std::string expanded;
  expanded.reserve(lowered.size());
  for (std::size_t i = 0; i < lowered.size();) {
    if (is_token_char(lowered[i])) {
      std::size_t j = i;
      while (j < lowered.size() && is_token_char(lowered[j])) ++j;
      std::string seg = lowered.substr(i, j - i);
      auto it = stops.contractions().find(seg);
      expanded += it != stops.contractions().end() ? it->second : seg;
      i = j;
    } else {
      expanded += lowered[i++];
    }
  }

  // Split on anything outside [a-z0-9] (apostrophes included: the contraction
  // table has dealt with the meaningful ones).
  std::vector<std::string> raw_tokens;
  std::string cur;
  for (char c : expanded) {
    if ((c >= 'a' && c <= 'z') || is_digit(c)) {
      cur += c;
    } else if (!cur.empty()) {
      raw_tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) raw_tokens.push_back(std::move(cur));

  for (auto& tok : raw_tokens) {
    if (pure_numeral(tok) || stops.contains(tok)) continue;
    bool elongated = false;
    std::string collapsed = collapse_elongation(tok, &elongated);
    if (elongated) ++out.n_elongated;
    std::string stem = porter_stem(collapsed);
    if (stem.empty() || stops.contains(stem)) continue;
    out.tokens.push_back(std::move(stem));
  }
  return out;
}

}  // namespace bullyrank::textprep
