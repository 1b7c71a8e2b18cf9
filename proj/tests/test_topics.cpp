#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "bullyrank/topics.hpp"

using namespace bullyrank;
using namespace bullyrank::topics;

namespace {

textprep::TokenizedText doc(std::vector<std::string> tokens) {
  textprep::TokenizedText t;
  t.tokens = std::move(tokens);
  return t;
}

// Two disjoint 4-word cliques; 30 documents each.
std::vector<textprep::TokenizedText> clique_corpus() {
  std::vector<std::string> a = {"apple", "avocado", "apricot", "almond"};
  std::vector<std::string> b = {"bolt", "bracket", "bearing", "bushing"};
  std::vector<textprep::TokenizedText> docs;
  for (int i = 0; i < 30; ++i) {
    std::vector<std::string> t;
    for (int j = 0; j < 8; ++j) t.push_back(a[(i + j) % 4]);
    docs.push_back(doc(t));
  }
  for (int i = 0; i < 30; ++i) {
    std::vector<std::string> t;
    for (int j = 0; j < 8; ++j) t.push_back(b[(i + 2 * j) % 4]);
    docs.push_back(doc(t));
  }
  return docs;
}

LdaConfig small_cfg(std::size_t k) {
  LdaConfig cfg;
  cfg.n_topics = k;
  cfg.alpha = 0.5;  // sparse doc-topic prior, suited to these 8-token documents
  cfg.train_sweeps = 200;
  cfg.min_posts = 10;
  return cfg;
}

std::size_t argmax(const std::vector<double>& v) {
  return std::max_element(v.begin(), v.end()) - v.begin();
}

}  // namespace

TEST_CASE("same seed gives identical models") {
  auto docs = clique_corpus();
  auto cfg = small_cfg(4);
  auto m1 = fit_lda(docs, cfg, 42);
  auto m2 = fit_lda(docs, cfg, 42);
  CHECK(m1.topic_word_counts == m2.topic_word_counts);
  CHECK(m1.topic_totals == m2.topic_totals);
  CHECK(m1.terms == m2.terms);
  auto m3 = fit_lda(docs, cfg, 43);
  CHECK(m1.topic_word_counts != m3.topic_word_counts);
}

TEST_CASE("final counts are consistent with the retained token total") {
  auto docs = clique_corpus();
  auto model = fit_lda(docs, small_cfg(3), 7);
  std::uint64_t total = 0;
  for (std::uint64_t t : model.topic_totals) total += t;
  CHECK(total == 60u * 8u);  // every token survives the floor here
  for (std::size_t k = 0; k < model.topic_word_counts.size(); ++k) {
    std::uint64_t row = 0;
    for (auto c : model.topic_word_counts[k]) row += c;
    CHECK(row == model.topic_totals[k]);
  }
}

TEST_CASE("document-frequency floor drops rare terms") {
  auto docs = clique_corpus();
  // "rare" appears in exactly 9 documents: below the floor of 10
  for (int i = 0; i < 9; ++i) docs[i].tokens.push_back("rare");
  auto model = fit_lda(docs, small_cfg(3), 7);
  CHECK(model.vocabulary.count("rare") == 0);

  // at exactly 10 documents it stays
  auto docs2 = clique_corpus();
  for (int i = 0; i < 10; ++i) docs2[i].tokens.push_back("rare");
  auto model2 = fit_lda(docs2, small_cfg(3), 7);
  CHECK(model2.vocabulary.count("rare") == 1);
}

TEST_CASE("empty post-filter vocabulary is fatal and names the threshold") {
  std::vector<textprep::TokenizedText> docs = {doc({"one"}), doc({"two"}), doc({"three"})};
  try {
    fit_lda(docs, small_cfg(2), 1);
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("10") != std::string::npos);
  }
}

TEST_CASE("disjoint cliques separate into distinct dominant topics") {
  auto docs = clique_corpus();
  auto cfg = small_cfg(2);
  int separated = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto model = fit_lda(docs, cfg, seed);
    std::vector<double> mean_a(2, 0.0), mean_b(2, 0.0);
    for (int i = 0; i < 30; ++i) {
      auto ta = infer_topics(model, docs[i]);
      auto tb = infer_topics(model, docs[30 + i]);
      for (int k = 0; k < 2; ++k) {
        mean_a[k] += ta[k] / 30.0;
        mean_b[k] += tb[k] / 30.0;
      }
    }
    if (argmax(mean_a) != argmax(mean_b)) ++separated;
  }
  CHECK(separated >= 19);  // >= 95% of seeds
}

TEST_CASE("inferred vectors are valid distributions") {
  auto docs = clique_corpus();
  auto model = fit_lda(docs, small_cfg(5), 11);
  for (const auto& d : docs) {
    auto theta = infer_topics(model, d);
    REQUIRE(theta.size() == 5);
    double sum = 0.0;
    for (double t : theta) {
      CHECK(t >= 0.0);
      sum += t;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("empty and out-of-vocabulary documents get the uniform vector") {
  auto docs = clique_corpus();
  auto model = fit_lda(docs, small_cfg(4), 3);
  for (const auto& d : {doc({}), doc({"zzzzz", "unseen"})}) {
    auto theta = infer_topics(model, d);
    for (double t : theta) CHECK(t == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("inference is deterministic per document content") {
  auto docs = clique_corpus();
  auto model = fit_lda(docs, small_cfg(4), 9);
  auto a = infer_topics(model, docs[0]);
  auto b = infer_topics(model, docs[0]);
  CHECK(a == b);
}

TEST_CASE("clique documents point at their clique's topic") {
  auto docs = clique_corpus();
  auto model = fit_lda(docs, small_cfg(2), 5);
  auto theta_a = infer_topics(model, doc({"apple", "avocado", "apricot", "almond"}));
  auto theta_b = infer_topics(model, doc({"bolt", "bracket", "bearing", "bushing"}));
  CHECK(argmax(theta_a) != argmax(theta_b));
}

TEST_CASE("top words surface the clique vocabulary") {
  auto docs = clique_corpus();
  auto model = fit_lda(docs, small_cfg(2), 5);
  auto words = top_words(model, 4);
  REQUIRE(words.size() == 2);
  // each topic's top-4 should be one clique or the other
  for (const auto& topic : words) {
    int a_hits = 0, b_hits = 0;
    for (const auto& w : topic) {
      if (w[0] == 'a') ++a_hits;
      if (w[0] == 'b') ++b_hits;
    }
    CHECK((a_hits == 4 || b_hits == 4));
  }
}

TEST_CASE("model round trips through the binary format") {
  auto docs = clique_corpus();
  auto model = fit_lda(docs, small_cfg(3), 13);
  auto path = (std::filesystem::temp_directory_path() / "br_lda_roundtrip.bin").string();
  save_lda(model, path);
  auto back = load_lda(path);
  CHECK(back.cfg.n_topics == model.cfg.n_topics);
  CHECK(back.cfg.alpha == model.cfg.alpha);
  CHECK(back.cfg.beta == model.cfg.beta);
  CHECK(back.cfg.infer_sweeps == model.cfg.infer_sweeps);
  CHECK(back.seed == model.seed);
  CHECK(back.terms == model.terms);
  CHECK(back.topic_word_counts == model.topic_word_counts);
  CHECK(back.topic_totals == model.topic_totals);
  // loaded model infers identically
  CHECK(infer_topics(back, docs[0]) == infer_topics(model, docs[0]));
  std::remove(path.c_str());
}

TEST_CASE("corrupt files are rejected") {
  auto path = (std::filesystem::temp_directory_path() / "br_lda_bad.bin").string();
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOPE this is not a model";
  }
  CHECK_THROWS(load_lda(path));
  std::remove(path.c_str());
}
