#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "bullyrank/config.hpp"

using namespace bullyrank::config;

TEST_CASE("defaults carry the documented values") {
  PipelineConfig c;
  CHECK(c.window_days == 90);
  CHECK(c.window_max_messages == 100);
  CHECK(c.vf.past_bullying == 0.42);
  CHECK(c.lsi_rank == 50);
  CHECK(c.lsi_tau == 0.4);
  CHECK(c.lda_topics == 25);
  CHECK(c.lda_alpha == 2.0);
  CHECK(c.lda_beta == 0.01);
  CHECK(c.embed_dim == 100);
  CHECK(c.embed_window == 5);
  CHECK(c.train_lr == 1e-3);
  CHECK(c.train_batch == 32);
  CHECK(c.train_max_epochs == 20);
  CHECK(c.train_patience == 3);
  CHECK(c.train_grad_clip == 5.0);
  CHECK(c.train_head == "three_class");
  CHECK(c.lime_samples == 500);
  CHECK(c.seed == 0);
}

TEST_CASE("parsing key = value with comments and blanks") {
  auto c = parse_config(
      "# run settings\n"
      "\n"
      "lda_topics = 10\n"
      "lsi_tau=0.55\n"
      "  train_head =  binary \n"
      "seed = 99\n"
      "data_dir = /tmp/lexicons\n",
      "test.cfg");
  CHECK(c.lda_topics == 10);
  CHECK(c.lsi_tau == 0.55);
  CHECK(c.train_head == "binary");
  CHECK(c.seed == 99);
  CHECK(c.data_dir == "/tmp/lexicons");
  // untouched keys keep their defaults
  CHECK(c.embed_dim == 100);
}

TEST_CASE("unknown keys are rejected with source position") {
  try {
    parse_config("lda_topics = 10\nnum_trees = 7\n", "run.cfg");
    FAIL("expected rejection");
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    CHECK(msg.find("run.cfg:2") != std::string::npos);
    CHECK(msg.find("num_trees") != std::string::npos);
  }
}

TEST_CASE("malformed values and lines are rejected") {
  CHECK_THROWS_AS(parse_config("lda_topics = many\n", "x"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("lda_topics = -3\n", "x"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("train_head = fourway\n", "x"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("lsi_tau 0.5\n", "x"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("embed_lr = 0.025extra\n", "x"), std::runtime_error);
}

TEST_CASE("every rendered key parses back to the same configuration") {
  PipelineConfig c;
  c.lda_topics = 7;
  c.lsi_tau = 0.31;
  c.train_head = "binary";
  c.vf.age = 0.11;
  c.seed = 1234;
  auto text = render_config(c);
  auto back = parse_config(text, "rendered");
  CHECK(back.lda_topics == 7);
  CHECK(back.lsi_tau == 0.31);
  CHECK(back.train_head == "binary");
  CHECK(back.vf.age == 0.11);
  CHECK(back.vf.past_bullying == 0.42);
  CHECK(back.seed == 1234);
  CHECK(back.window_days == c.window_days);
  CHECK(back.embed_lr == c.embed_lr);
  CHECK(back.logreg_iters == c.logreg_iters);
}
