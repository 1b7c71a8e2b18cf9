#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "bullyrank/metrics.hpp"
#include "bullyrank/rng.hpp"

using namespace bullyrank;
using namespace bullyrank::metrics;

TEST_CASE("perfect predictions") {
  std::vector<int> y = {0, 1, 2, 1, 0, 2, 2};
  auto r = compute_metrics(y, y);
  CHECK(r.accuracy == 1.0);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(r.precision[c] == 1.0);
    CHECK(r.recall[c] == 1.0);
    CHECK(r.f1[c] == 1.0);
  }
  CHECK(r.macro_f1 == 1.0);
}

TEST_CASE("hand-computed binary confusion [[2,1],[0,3]]") {
  // truth 0 three times (predicted 0,0,1), truth 1 three times (all predicted 1)
  std::vector<int> truth = {0, 0, 0, 1, 1, 1};
  std::vector<int> pred = {0, 0, 1, 1, 1, 1};
  auto r = compute_metrics(pred, truth);
  REQUIRE(r.n_classes == 2);
  CHECK(r.confusion[0][0] == 2);
  CHECK(r.confusion[0][1] == 1);
  CHECK(r.confusion[1][0] == 0);
  CHECK(r.confusion[1][1] == 3);
  CHECK(r.accuracy == doctest::Approx(5.0 / 6.0));
  CHECK(r.precision[0] == doctest::Approx(1.0));
  CHECK(r.recall[0] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("collapsed predictions on balanced three-way truth") {
  std::vector<int> truth = {0, 1, 2, 0, 1, 2};
  std::vector<int> pred(6, 0);
  auto r = compute_metrics(pred, truth, 3);
  CHECK(r.accuracy == doctest::Approx(1.0 / 3.0));
  CHECK(r.f1[0] == doctest::Approx(0.5));  // P=1/3, R=1 -> 2*(1/3)/(4/3)
  CHECK(r.f1[1] == 0.0);
  CHECK(r.f1[2] == 0.0);
  CHECK(r.macro_f1 == doctest::Approx(0.5 / 3.0));
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(compute_metrics({}, {}), std::runtime_error);
  CHECK_THROWS_AS(compute_metrics({0, 1}, {0}), std::runtime_error);
  CHECK_THROWS_AS(compute_metrics({0, -1}, {0, 1}), std::runtime_error);
  CHECK_THROWS_AS(compute_metrics({0, 3}, {0, 1}, 3), std::runtime_error);
}

TEST_CASE("agrees with a brute-force counting oracle on 1000 random label pairs") {
  Rng rng(2026);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng.uniform_index(40);
    std::vector<int> pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = static_cast<int>(rng.uniform_index(3));
      truth[i] = static_cast<int>(rng.uniform_index(3));
    }
    auto r = compute_metrics(pred, truth, 3);

    // Independent per-class tallies straight from the definitions.
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (pred[i] == truth[i]) ++correct;
    CHECK(r.accuracy == doctest::Approx(static_cast<double>(correct) / n).epsilon(1e-12));

    double macro_f1 = 0.0;
    for (int c = 0; c < 3; ++c) {
      std::size_t tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (pred[i] == c && truth[i] == c) ++tp;
        if (pred[i] == c && truth[i] != c) ++fp;
        if (pred[i] != c && truth[i] == c) ++fn;
      }
      double precision = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
      double recall = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
      double f1 = precision + recall == 0 ? 0.0 : 2 * precision * recall / (precision + recall);
      CHECK(r.precision[static_cast<std::size_t>(c)] == doctest::Approx(precision).epsilon(1e-12));
      CHECK(r.recall[static_cast<std::size_t>(c)] == doctest::Approx(recall).epsilon(1e-12));
      CHECK(r.f1[static_cast<std::size_t>(c)] == doctest::Approx(f1).epsilon(1e-12));
      macro_f1 += f1;
    }
    CHECK(r.macro_f1 == doctest::Approx(macro_f1 / 3.0).epsilon(1e-12));

    // row sums = supports
    for (int c = 0; c < 3; ++c) {
      std::size_t support = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (truth[i] == c) ++support;
      std::size_t row = 0;
      for (std::size_t k = 0; k < 3; ++k) row += r.confusion[static_cast<std::size_t>(c)][k];
      CHECK(row == support);
    }
  }
}

TEST_CASE("text rendering mentions every class") {
  std::vector<int> truth = {0, 1, 2, 0, 1, 2};
  std::vector<int> pred = {0, 1, 1, 0, 2, 2};
  auto r = compute_metrics(pred, truth, 3);
  auto text = render_text(r, {"not_bullying", "mild_bullying", "severe_bullying"});
  CHECK(text.find("not_bullying") != std::string::npos);
  CHECK(text.find("mild_bullying") != std::string::npos);
  CHECK(text.find("severe_bullying") != std::string::npos);
  CHECK(text.find("macro") != std::string::npos);
  CHECK_THROWS_AS(render_text(r, {"a"}), std::runtime_error);
}
