#include "bullyrank/topics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "bullyrank/binio.hpp"
#include "bullyrank/rng.hpp"

namespace bullyrank::topics {

namespace {

// Draws a topic index proportionally to `weights`, consuming one uniform.
std::size_t sample_discrete(Rng& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = rng.uniform() * total;
  double cum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    cum += weights[k];
    if (u < cum) return k;
  }
  return weights.size() - 1;  // guards against rounding at the top end
}

std::string joined(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) {
    s += t;
    s += ' ';
  }
  return s;
}

}  // namespace

LdaModel fit_lda(const std::vector<textprep::TokenizedText>& docs, const LdaConfig& cfg,
                 std::uint64_t seed) {
  if (cfg.n_topics < 1 || cfg.n_topics > 65535)
    throw std::runtime_error("fit_lda: topic count must be in [1, 65535]");
  if (docs.size() < 2) throw std::runtime_error("fit_lda: need at least 2 documents");

  LdaModel model;
  model.cfg = cfg;
  model.seed = seed;

  // Document-frequency floor over posts.
  {
    std::map<std::string, std::size_t> df;
    for (const auto& d : docs) {
      std::map<std::string, bool> seen;
      for (const auto& t : d.tokens)
        if (!seen[t]) {
          seen[t] = true;
          df[t] += 1;
        }
    }
    for (const auto& [t, n] : df) {
      if (n >= cfg.min_posts) {
        model.vocabulary[t] = model.terms.size();
        model.terms.push_back(t);
      }
    }
  }
  if (model.terms.empty())
    throw std::runtime_error(
        "fit_lda: vocabulary is empty after the document-frequency floor of " +
        std::to_string(cfg.min_posts) + " posts");

  const std::size_t K = cfg.n_topics;
  const std::size_t V = model.terms.size();

  // Token streams restricted to the retained vocabulary.
  std::vector<std::vector<std::uint32_t>> words(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d)
    for (const auto& t : docs[d].tokens) {
      auto it = model.vocabulary.find(t);
      if (it != model.vocabulary.end())
        words[d].push_back(static_cast<std::uint32_t>(it->second));
    }

  model.topic_word_counts.assign(K, std::vector<std::uint32_t>(V, 0));
  model.topic_totals.assign(K, 0);
  std::vector<std::vector<std::uint32_t>> doc_topic(docs.size(),
                                                    std::vector<std::uint32_t>(K, 0));
  std::vector<std::vector<std::uint16_t>> z(docs.size());

  Rng rng(stage_seed(seed, "topics/train"));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      const std::size_t k = rng.uniform_index(K);
      z[d][i] = static_cast<std::uint16_t>(k);
      doc_topic[d][k] += 1;
      model.topic_word_counts[k][words[d][i]] += 1;
      model.topic_totals[k] += 1;
    }
  }

  std::vector<double> weights(K);
  const double vbeta = double(V) * cfg.beta;
  for (std::size_t sweep = 0; sweep < cfg.train_sweeps; ++sweep) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::uint32_t w = words[d][i];
        const std::size_t old = z[d][i];
        doc_topic[d][old] -= 1;
        model.topic_word_counts[old][w] -= 1;
        model.topic_totals[old] -= 1;
        for (std::size_t k = 0; k < K; ++k)
          weights[k] = (double(doc_topic[d][k]) + cfg.alpha) *
                       (double(model.topic_word_counts[k][w]) + cfg.beta) /
                       (double(model.topic_totals[k]) + vbeta);
        const std::size_t knew = sample_discrete(rng, weights);
        z[d][i] = static_cast<std::uint16_t>(knew);
        doc_topic[d][knew] += 1;
        model.topic_word_counts[knew][w] += 1;
        model.topic_totals[knew] += 1;
      }
    }
  }
  return model;
}

std::vector<double> infer_topics(const LdaModel& model, const textprep::TokenizedText& doc) {
  const std::size_t K = model.cfg.n_topics;
  std::vector<std::uint32_t> words;
  for (const auto& t : doc.tokens) {
    auto it = model.vocabulary.find(t);
    if (it != model.vocabulary.end()) words.push_back(static_cast<std::uint32_t>(it->second));
  }
  if (words.empty()) return std::vector<double>(K, 1.0 / double(K));

  Rng rng(stage_seed(model.seed ^ fnv1a64(joined(doc.tokens)), "topics/infer"));
  std::vector<std::uint32_t> local(K, 0);
  std::vector<std::uint16_t> z(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::size_t k = rng.uniform_index(K);
    z[i] = static_cast<std::uint16_t>(k);
    local[k] += 1;
  }

  const std::size_t V = model.terms.size();
  const double vbeta = double(V) * model.cfg.beta;
  std::vector<double> weights(K);
  for (std::size_t sweep = 0; sweep < model.cfg.infer_sweeps; ++sweep) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::uint32_t w = words[i];
      local[z[i]] -= 1;
      for (std::size_t k = 0; k < K; ++k)
        weights[k] = (double(local[k]) + model.cfg.alpha) *
                     (double(model.topic_word_counts[k][w]) + model.cfg.beta) /
                     (double(model.topic_totals[k]) + vbeta);
      const std::size_t knew = sample_discrete(rng, weights);
      z[i] = static_cast<std::uint16_t>(knew);
      local[knew] += 1;
    }
  }

  std::vector<double> theta(K);
  double norm = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    theta[k] = double(local[k]) + model.cfg.alpha;
    norm += theta[k];
  }
  for (double& t : theta) t /= norm;
  return theta;
}

std::vector<std::vector<std::string>> top_words(const LdaModel& model, std::size_t n) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : model.topic_word_counts) {
    std::vector<std::size_t> idx(row.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    std::vector<std::string> words;
    for (std::size_t i = 0; i < std::min(n, idx.size()); ++i)
      words.push_back(model.terms[idx[i]]);
    out.push_back(std::move(words));
  }
  return out;
}

namespace {
constexpr char kMagic[4] = {'B', 'R', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_lda(const LdaModel& model, const std::string& path) {
  BinWriter w(path);
  w.magic(kMagic);
  w.u32(kVersion);
  w.u64(model.cfg.n_topics);
  w.f64(model.cfg.alpha);
  w.f64(model.cfg.beta);
  w.u64(model.cfg.train_sweeps);
  w.u64(model.cfg.infer_sweeps);
  w.u64(model.cfg.min_posts);
  w.u64(model.seed);
  w.u64(model.terms.size());
  for (const auto& t : model.terms) w.str(t);
  for (const auto& row : model.topic_word_counts) w.u32s(row);
}

LdaModel load_lda(const std::string& path) {
  BinReader r(path);
  r.expect_magic(kMagic);
  if (r.u32() != kVersion) throw std::runtime_error(path + ": unsupported topic model version");
  LdaModel model;
  model.cfg.n_topics = r.u64();
  model.cfg.alpha = r.f64();
  model.cfg.beta = r.f64();
  model.cfg.train_sweeps = r.u64();
  model.cfg.infer_sweeps = r.u64();
  model.cfg.min_posts = r.u64();
  model.seed = r.u64();
  const std::size_t v = r.u64();
  model.terms.reserve(v);
  for (std::size_t i = 0; i < v; ++i) {
    model.terms.push_back(r.str());
    model.vocabulary[model.terms.back()] = i;
  }
  model.topic_totals.assign(model.cfg.n_topics, 0);
  for (std::size_t k = 0; k < model.cfg.n_topics; ++k) {
    model.topic_word_counts.push_back(r.u32s());
    if (model.topic_word_counts.back().size() != v)
      throw std::runtime_error(path + ": inconsistent topic model dimensions");
    for (std::uint32_t c : model.topic_word_counts.back()) model.topic_totals[k] += c;
  }
  return model;
}

}  // namespace bullyrank::topics
