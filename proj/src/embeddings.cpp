#include "bullyrank/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "bullyrank/binio.hpp"
#include "bullyrank/rng.hpp"

namespace bullyrank::embeddings {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

EmbeddingMatrix train_cbow(const std::vector<textprep::TokenizedText>& docs,
                           const CbowConfig& cfg, std::uint64_t seed, TrainStats* stats) {
  if (cfg.dim < 1 || cfg.window < 1 || cfg.epochs < 1)
    throw std::runtime_error("train_cbow: dim, window and epochs must be positive");

  EmbeddingMatrix m;
  m.dim = cfg.dim;
  m.window = cfg.window;

  // Vocabulary and unigram counts (sorted terms for a stable layout).
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total_tokens = 0;
  for (const auto& d : docs)
    for (const auto& t : d.tokens) {
      counts[t] += 1;
      ++total_tokens;
    }
  if (total_tokens == 0) throw std::runtime_error("train_cbow: corpus has no tokens");
  for (const auto& [t, _] : counts) {
    m.vocabulary[t] = m.terms.size() + 2;
    m.terms.push_back(t);
  }
  const std::size_t V = m.terms.size();

  // Cumulative unigram^0.75 table for negative sampling.
  std::vector<double> cum(V);
  {
    double run = 0.0;
    for (std::size_t i = 0; i < V; ++i) {
      run += std::pow(double(counts[m.terms[i]]), 0.75);
      cum[i] = run;
    }
  }
  Rng rng(stage_seed(seed, "embeddings/train"));
  auto draw_negative = [&]() -> std::size_t {
    const double u = rng.uniform() * cum.back();
    return std::size_t(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
  };

  // Input rows: PAD and OOV zeroed, real terms uniform in (-0.5/d, 0.5/d).
  // Output rows start at zero, the usual word2vec arrangement.
  m.vectors.assign(V + 2, std::vector<double>(cfg.dim, 0.0));
  for (std::size_t i = 2; i < V + 2; ++i)
    for (std::size_t j = 0; j < cfg.dim; ++j)
      m.vectors[i][j] = (rng.uniform() - 0.5) / double(cfg.dim);
  std::vector<std::vector<double>> out(V, std::vector<double>(cfg.dim, 0.0));

  // Token rows per document, fixed traversal order.
  std::vector<std::vector<std::size_t>> rows(docs.size());
  std::uint64_t positions_per_epoch = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& t : docs[d].tokens) rows[d].push_back(m.vocabulary.at(t));
    positions_per_epoch += rows[d].size();
  }
  const double total_positions = double(positions_per_epoch) * double(cfg.epochs);

  std::vector<double> h(cfg.dim), grad_h(cfg.dim);
  std::uint64_t processed = 0;
  if (stats) stats->epoch_loss.clear();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::uint64_t loss_terms = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const auto& sent = rows[d];
      for (std::size_t t = 0; t < sent.size(); ++t) {
        const double lr =
            std::max(cfg.lr * (1.0 - double(processed) / total_positions), cfg.lr * 1e-4);
        ++processed;

        const std::size_t lo = t >= cfg.window ? t - cfg.window : 0;
        const std::size_t hi = std::min(sent.size(), t + cfg.window + 1);
        const std::size_t cw = hi - lo - 1;
        if (cw == 0) continue;

        std::fill(h.begin(), h.end(), 0.0);
        for (std::size_t c = lo; c < hi; ++c) {
          if (c == t) continue;
          const auto& v = m.vectors[sent[c]];
          for (std::size_t j = 0; j < cfg.dim; ++j) h[j] += v[j];
        }
        for (std::size_t j = 0; j < cfg.dim; ++j) h[j] /= double(cw);

        std::fill(grad_h.begin(), grad_h.end(), 0.0);
        const std::size_t target = sent[t] - 2;
        for (std::size_t s = 0; s <= cfg.negatives; ++s) {
          std::size_t word;
          double label;
          if (s == 0) {
            word = target;
            label = 1.0;
          } else {
            word = draw_negative();
            if (word == target) continue;  // skip accidental positives
            label = 0.0;
          }
          auto& v = out[word];
          double score = 0.0;
          for (std::size_t j = 0; j < cfg.dim; ++j) score += h[j] * v[j];
          const double p = sigmoid(score);
          loss_sum += label > 0.5 ? -std::log(std::max(p, 1e-12))
                                  : -std::log(std::max(1.0 - p, 1e-12));
          ++loss_terms;
          const double g = (label - p) * lr;
          for (std::size_t j = 0; j < cfg.dim; ++j) {
            grad_h[j] += g * v[j];
            v[j] += g * h[j];
          }
        }
        for (std::size_t c = lo; c < hi; ++c) {
          if (c == t) continue;
          auto& v = m.vectors[sent[c]];
          for (std::size_t j = 0; j < cfg.dim; ++j) v[j] += grad_h[j] / double(cw);
        }
      }
    }
    if (stats) stats->epoch_loss.push_back(loss_terms ? loss_sum / double(loss_terms) : 0.0);
  }

  for (const auto& row : m.vectors)
    for (double x : row)
      if (!std::isfinite(x)) throw std::runtime_error("train_cbow: non-finite vector component");
  return m;
}

SimilarityResult similarity(const EmbeddingMatrix& m, const std::string& a,
                            const std::string& b) {
  SimilarityResult res;
  const std::size_t ra = m.row_for(a);
  const std::size_t rb = m.row_for(b);
  res.a_oov = ra == kOovIndex && m.vocabulary.find(a) == m.vocabulary.end();
  res.b_oov = rb == kOovIndex && m.vocabulary.find(b) == m.vocabulary.end();
  const auto& va = m.vectors[ra];
  const auto& vb = m.vectors[rb];
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < m.dim; ++j) {
    dot += va[j] * vb[j];
    na += va[j] * va[j];
    nb += vb[j] * vb[j];
  }
  res.cosine = (na <= 0.0 || nb <= 0.0) ? 0.0 : dot / (std::sqrt(na) * std::sqrt(nb));
  return res;
}

namespace {
constexpr char kMagic[4] = {'B', 'R', 'E', 'M'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_embeddings(const EmbeddingMatrix& m, const std::string& path) {
  BinWriter w(path);
  w.magic(kMagic);
  w.u32(kVersion);
  w.u64(m.dim);
  w.u64(m.window);
  w.u64(m.terms.size());
  for (const auto& t : m.terms) w.str(t);
  for (const auto& row : m.vectors) w.f64s(row);
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  BinReader r(path);
  r.expect_magic(kMagic);
  if (r.u32() != kVersion) throw std::runtime_error(path + ": unsupported embedding version");
  EmbeddingMatrix m;
  m.dim = r.u64();
  m.window = r.u64();
  const std::size_t v = r.u64();
  for (std::size_t i = 0; i < v; ++i) {
    m.terms.push_back(r.str());
    m.vocabulary[m.terms.back()] = i + 2;
  }
  for (std::size_t i = 0; i < v + 2; ++i) {
    m.vectors.push_back(r.f64s());
    if (m.vectors.back().size() != m.dim)
      throw std::runtime_error(path + ": inconsistent embedding dimensions");
  }
  return m;
}

void export_text(const EmbeddingMatrix& m, const std::string& path) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write embedding text export: " + path);
  outf.precision(17);
  for (std::size_t i = 0; i < m.terms.size(); ++i) {
    outf << m.terms[i];
    for (double x : m.vectors[i + 2]) outf << ' ' << x;
    outf << '\n';
  }
}

}  // namespace bullyrank::embeddings
