#include "bullyrank/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bullyrank/paths.hpp"

namespace bullyrank::semantics {

namespace {

using Matrix = std::vector<std::vector<double>>;

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvalues land on
// the diagonal of `a`, eigenvectors in the columns of `vecs`.
void jacobi_eigen(Matrix& a, Matrix& vecs) {
  const std::size_t n = a.size();
  vecs.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) vecs[i][i] = 1.0;
  if (n < 2) return;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale += a[i][j] * a[i][j];
  const double tol = 1e-28 * (scale + 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off <= tol) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = vecs[i][p], viq = vecs[i][q];
          vecs[i][p] = c * vip - s * viq;
          vecs[i][q] = s * vip + c * viq;
        }
      }
    }
  }
}

void canonicalize_sign(std::vector<double>& v) {
  double best = 0.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      at = i;
    }
  }
  if (!v.empty() && v[at] < 0.0)
    for (double& x : v) x = -x;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

LsiModel build_lsi(const std::vector<textprep::TokenizedText>& docs, std::size_t k) {
  if (k < 1) throw std::runtime_error("build_lsi: rank must be at least 1");
  const std::size_t n_docs = docs.size();
  if (n_docs < 2) throw std::runtime_error("build_lsi: need at least 2 documents");

  LsiModel model;
  {
    std::map<std::string, std::size_t> df;
    for (const auto& d : docs) {
      std::map<std::string, int> seen;
      for (const auto& t : d.tokens) seen[t] += 1;
      for (const auto& [t, _] : seen) df[t] += 1;
    }
    if (df.size() < 2) throw std::runtime_error("build_lsi: need at least 2 distinct terms");
    model.terms.reserve(df.size());
    model.idf.reserve(df.size());
    for (const auto& [t, d] : df) {
      model.vocabulary[t] = model.terms.size();
      model.terms.push_back(t);
      model.idf.push_back(std::log((1.0 + double(n_docs)) / (1.0 + double(d))) + 1.0);
    }
  }
  const std::size_t m = model.terms.size();

  // A is m x n: raw term count times smoothed idf
  Matrix A(m, std::vector<double>(n_docs, 0.0));
  for (std::size_t j = 0; j < n_docs; ++j)
    for (const auto& t : docs[j].tokens) {
      auto it = model.vocabulary.find(t);
      A[it->second][j] += model.idf[it->second];
    }

  // Eigendecompose the smaller Gram matrix, then recover U·Σ.
  const bool use_terms_side = m <= n_docs;
  const std::size_t g = use_terms_side ? m : n_docs;
  Matrix gram(g, std::vector<double>(g, 0.0));
  if (use_terms_side) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        double s = 0.0;
        for (std::size_t d = 0; d < n_docs; ++d) s += A[i][d] * A[j][d];
        gram[i][j] = gram[j][i] = s;
      }
  } else {
    for (std::size_t i = 0; i < n_docs; ++i)
      for (std::size_t j = i; j < n_docs; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < m; ++t) s += A[t][i] * A[t][j];
        gram[i][j] = gram[j][i] = s;
      }
  }

  Matrix vecs;
  jacobi_eigen(gram, vecs);
  std::vector<std::size_t> order(g);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gram[a][a] > gram[b][b]; });

  double top = std::max(gram[order[0]][order[0]], 0.0);
  const double rank_tol = std::sqrt(top) * 1e-10 + 1e-300;
  std::size_t rank = 0;
  for (std::size_t i = 0; i < g; ++i) {
    double lam = gram[order[i]][order[i]];
    if (lam > 0.0 && std::sqrt(lam) > rank_tol) ++rank;
  }
  if (rank == 0) throw std::runtime_error("build_lsi: degenerate corpus (rank zero)");
  model.k = std::min(k, rank);

  model.singular_values.resize(model.k);
  model.term_vectors.assign(m, std::vector<double>(model.k, 0.0));
  for (std::size_t j = 0; j < model.k; ++j) {
    const std::size_t e = order[j];
    const double sigma = std::sqrt(std::max(gram[e][e], 0.0));
    model.singular_values[j] = sigma;
    std::vector<double> u(m, 0.0);
    if (use_terms_side) {
      for (std::size_t i = 0; i < m; ++i) u[i] = vecs[i][e];
    } else {
      // u = A·v / σ
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t d = 0; d < n_docs; ++d) s += A[i][d] * vecs[d][e];
        u[i] = s / sigma;
      }
    }
    canonicalize_sign(u);
    for (std::size_t i = 0; i < m; ++i) model.term_vectors[i][j] = u[i] * sigma;
  }
  return model;
}

std::vector<double> project_doc(const LsiModel& model, const std::vector<std::string>& tokens) {
  std::vector<double> q(model.terms.size(), 0.0);
  for (const auto& t : tokens) {
    auto it = model.vocabulary.find(t);
    if (it != model.vocabulary.end()) q[it->second] += model.idf[it->second];
  }
  std::vector<double> out(model.k, 0.0);
  for (std::size_t j = 0; j < model.k; ++j) {
    const double sigma = model.singular_values[j];
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (q[i] != 0.0) s += (model.term_vectors[i][j] / sigma) * q[i];
    out[j] = s / sigma;
  }
  return out;
}

KeywordSet expand_keywords(const LsiModel& model, const std::vector<std::string>& seeds,
                           double tau) {
  std::vector<const std::vector<double>*> seed_vecs;
  std::vector<std::string> misses;
  for (const auto& s : seeds) {
    auto it = model.vocabulary.find(s);
    if (it != model.vocabulary.end())
      seed_vecs.push_back(&model.term_vectors[it->second]);
    else
      misses.push_back(s);
  }
  if (seed_vecs.empty()) {
    std::string msg = "expand_keywords: no seed term found in the corpus vocabulary; misses:";
    for (const auto& s : misses) msg += " " + s;
    throw std::runtime_error(msg);
  }

  std::vector<double> centroid(model.k, 0.0);
  for (const auto* v : seed_vecs)
    for (std::size_t j = 0; j < model.k; ++j) centroid[j] += (*v)[j];
  for (double& c : centroid) c /= double(seed_vecs.size());

  KeywordSet keys;
  for (std::size_t i = 0; i < model.terms.size(); ++i) {
    const double cos = cosine(model.term_vectors[i], centroid);
    if (cos >= tau && cos > 0.0) keys.entries[model.terms[i]] = std::min(1.0, cos);
  }
  for (const auto& s : seeds) keys.entries[s] = 1.0;
  return keys;
}

std::vector<std::string> load_seed_terms(const std::string& data_dir) {
  const std::string path = data_file(resolve_data_dir(data_dir), "seed_keywords.txt");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open seed lexicon: " + path);
  std::vector<std::string> out;
  std::map<std::string, bool> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::string word;
    auto flush = [&] {
      if (word.empty()) return;
      std::string stem = textprep::porter_stem(textprep::to_lower(word));
      if (!stem.empty() && !seen[stem]) {
        seen[stem] = true;
        out.push_back(stem);
      }
      word.clear();
    };
    for (char c : line) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'')
        word += c;
      else
        flush();
    }
    flush();
  }
  if (out.empty()) throw std::runtime_error("seed lexicon is empty: " + path);
  return out;
}

double raw_hit_density(const std::vector<std::string>& tokens, const KeywordSet& keys) {
  if (tokens.empty()) return 0.0;
  double h = 0.0;
  for (const auto& t : tokens) {
    auto it = keys.entries.find(t);
    if (it != keys.entries.end()) h += it->second;
  }
  return h / double(tokens.size());
}

double corpus_max_density(const std::vector<textprep::TokenizedText>& docs,
                          const KeywordSet& keys) {
  double best = 0.0;
  for (const auto& d : docs) best = std::max(best, raw_hit_density(d.tokens, keys));
  return best;
}

double semantic_score(const textprep::TokenizedText& text, const KeywordSet& keys,
                      double corpus_max) {
  if (corpus_max <= 0.0) return 0.0;
  return std::min(1.0, raw_hit_density(text.tokens, keys) / corpus_max);
}

}  // namespace bullyrank::semantics
