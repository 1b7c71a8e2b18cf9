#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "bullyrank/embeddings.hpp"
#include "bullyrank/rng.hpp"

using namespace bullyrank;
using namespace bullyrank::embeddings;

namespace {

textprep::TokenizedText doc(std::vector<std::string> tokens) {
  textprep::TokenizedText t;
  t.tokens = std::move(tokens);
  return t;
}

// "sob" and "pain" always co-occur; "green" lives in a disjoint context.
std::vector<textprep::TokenizedText> cooccurrence_corpus() {
  std::vector<textprep::TokenizedText> docs;
  const std::vector<std::string> grief = {"sob", "pain", "cry", "hurt"};
  const std::vector<std::string> nature = {"green", "tree", "leaf", "grass"};
  for (int i = 0; i < 60; ++i) {
    std::vector<std::string> g, n;
    for (int j = 0; j < 6; ++j) {
      g.push_back(grief[(i + j) % 4]);
      n.push_back(nature[(i + 2 * j) % 4]);
    }
    docs.push_back(doc(g));
    docs.push_back(doc(n));
  }
  return docs;
}

}  // namespace

TEST_CASE("matrix shape and the PAD row") {
  auto docs = cooccurrence_corpus();
  CbowConfig cfg;  // d = 100
  auto m = train_cbow(docs, cfg, 1);
  CHECK(m.dim == 100);
  CHECK(m.terms.size() == 8);
  REQUIRE(m.vectors.size() == 8 + 2);  // N distinct tokens -> N + 2 rows
  for (const auto& row : m.vectors) CHECK(row.size() == 100);
  for (double x : m.vectors[kPadIndex]) CHECK(x == 0.0);
  for (const auto& [term, row] : m.vocabulary) CHECK(row >= 2);
  for (const auto& row : m.vectors)
    for (double x : row) CHECK(std::isfinite(x));
}

TEST_CASE("co-occurring words end up closer than disjoint ones") {
  auto docs = cooccurrence_corpus();
  CbowConfig cfg;
  cfg.window = 5;
  cfg.epochs = 20;  // enough passes for the tiny corpus to take shape
  auto m = train_cbow(docs, cfg, 7);
  auto close = similarity(m, "sob", "pain");
  auto far = similarity(m, "sob", "green");
  CHECK_FALSE(close.a_oov);
  CHECK_FALSE(far.b_oov);
  CHECK(close.cosine > far.cosine);
}

TEST_CASE("similarity basics") {
  auto docs = cooccurrence_corpus();
  auto m = train_cbow(docs, {}, 3);

  auto self = similarity(m, "sob", "sob");
  CHECK(self.cosine == doctest::Approx(1.0).epsilon(1e-12));

  // hand-set orthogonal vectors
  EmbeddingMatrix toy;
  toy.dim = 4;
  toy.vocabulary = {{"x", 2}, {"y", 3}};
  toy.terms = {"x", "y"};
  toy.vectors = {{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}, {0, 2, 0, 0}};
  CHECK(similarity(toy, "x", "y").cosine == 0.0);

  auto unk = similarity(m, "sob", "qqqq");
  CHECK(unk.b_oov);
  CHECK_FALSE(unk.a_oov);
  CHECK(unk.cosine == 0.0);  // OOV row is zero until the network trains it
}

TEST_CASE("training is deterministic under the seed") {
  auto docs = cooccurrence_corpus();
  CbowConfig cfg;
  cfg.epochs = 3;
  auto a = train_cbow(docs, cfg, 42);
  auto b = train_cbow(docs, cfg, 42);
  CHECK(a.vectors == b.vectors);
  auto c = train_cbow(docs, cfg, 43);
  CHECK(a.vectors != c.vectors);
}

TEST_CASE("per-epoch loss is non-increasing for at least 9 of 10 seeds") {
  auto docs = cooccurrence_corpus();
  CbowConfig cfg;
  cfg.epochs = 5;
  int monotone = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TrainStats stats;
    train_cbow(docs, cfg, seed, &stats);
    REQUIRE(stats.epoch_loss.size() == 5);
    bool ok = true;
    for (std::size_t e = 1; e < stats.epoch_loss.size(); ++e)
      if (stats.epoch_loss[e] > stats.epoch_loss[e - 1] + 1e-12) ok = false;
    if (ok) ++monotone;
  }
  CHECK(monotone >= 9);
}

TEST_CASE("empty corpus is fatal") {
  CHECK_THROWS(train_cbow({}, {}, 1));
  CHECK_THROWS(train_cbow({doc({}), doc({})}, {}, 1));
}

TEST_CASE("binary round trip preserves everything") {
  auto docs = cooccurrence_corpus();
  CbowConfig cfg;
  cfg.epochs = 2;
  auto m = train_cbow(docs, cfg, 5);
  auto path = (std::filesystem::temp_directory_path() / "br_emb_roundtrip.bin").string();
  save_embeddings(m, path);
  auto back = load_embeddings(path);
  CHECK(back.dim == m.dim);
  CHECK(back.window == m.window);
  CHECK(back.terms == m.terms);
  CHECK(back.vocabulary == m.vocabulary);
  CHECK(back.vectors == m.vectors);
  for (double x : back.vectors[kPadIndex]) CHECK(x == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("text export lists every term with its full vector") {
  auto docs = cooccurrence_corpus();
  CbowConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 1;
  auto m = train_cbow(docs, cfg, 5);
  auto path = (std::filesystem::temp_directory_path() / "br_emb_export.txt").string();
  export_text(m, path);
  std::ifstream in(path);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    std::size_t fields = 1;
    for (char ch : line)
      if (ch == ' ') ++fields;
    CHECK(fields == 1 + 8);
  }
  CHECK(lines == m.terms.size());
  std::remove(path.c_str());
}
