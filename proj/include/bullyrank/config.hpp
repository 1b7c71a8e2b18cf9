#pragma once

#include <cstdint>
#include <string>

#include "bullyrank/vulnerability.hpp"

namespace bullyrank::config {

// Every tunable of the pipeline with its default. Values load from a
// `key = value` text file; unknown keys are rejected.
struct PipelineConfig {
  // dataset window
  int window_days = 90;
  std::size_t window_max_messages = 100;

  // synthetic corpus generator
  int generate_users = 25;
  int generate_min_messages = 50;
  int generate_max_messages = 120;

  // vulnerability-factor weights
  vulnerability::VulnerabilityWeights vf{};

  // semantic-score calibration
  std::size_t lsi_rank = 50;
  double lsi_tau = 0.4;
  std::size_t lsi_max_docs = 500;

  // topic model
  std::size_t lda_topics = 25;
  double lda_alpha = 2.0;
  double lda_beta = 0.01;
  std::size_t lda_train_sweeps = 500;
  std::size_t lda_infer_sweeps = 50;
  std::size_t lda_min_posts = 10;

  // word embeddings
  std::size_t embed_dim = 100;
  std::size_t embed_window = 5;
  std::size_t embed_negatives = 5;
  std::size_t embed_epochs = 5;
  double embed_lr = 0.025;

  // network training
  double train_lr = 1e-3;
  std::size_t train_batch = 32;
  std::size_t train_max_epochs = 20;
  std::size_t train_patience = 3;
  double train_grad_clip = 5.0;
  std::string train_head = "three_class";  // or "binary"

  // logistic-regression baseline
  double logreg_lr = 0.5;
  std::size_t logreg_iters = 300;

  // explanations
  std::size_t lime_samples = 500;
  std::size_t shap_instances = 25;

  // root seed for every stochastic stage (the --seed flag overrides it)
  std::uint64_t seed = 0;

  // lexicon/template directory override; empty = bundled data
  std::string data_dir;
};

// Parses configuration text; `where` names the source in diagnostics.
PipelineConfig parse_config(const std::string& text, const std::string& where);

PipelineConfig load_config(const std::string& path);

// The full key list with current values, in canonical order — suitable both
// as documentation and as a parseable config file.
std::string render_config(const PipelineConfig& cfg);

}  // namespace bullyrank::config
