#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bullyrank/embeddings.hpp"
#include "bullyrank/features.hpp"

namespace bullyrank::net {

enum class HeadMode { three_class, binary };

// All trainable tensors of the two-input network, stored row-major. The same
// struct doubles as the gradient / moment accumulator so the optimizer and
// the finite-difference check can walk every tensor uniformly.
struct ModelParameters {
  HeadMode head_mode = HeadMode::three_class;
  std::size_t vocab_rows = 0;  // |V| + 2 (padding and out-of-vocabulary rows)
  std::size_t embed_dim = 100;
  std::size_t hidden = 64;
  std::size_t tabular_dim = features::kTabularDim;
  std::size_t dense1_units = 32;
  std::size_t dense2_units = 16;

  // Vocabulary terms in row order (row = index + 2); kept with the weights so
  // a saved model can encode raw token sequences on its own.
  std::vector<std::string> terms;

  std::vector<double> embedding;  // vocab_rows x embed_dim

  // Recurrent cell: per-gate input weights (hidden x embed_dim), recurrent
  // weights (hidden x hidden) and biases (hidden).
  std::vector<double> w_input, w_forget, w_output, w_cell;
  std::vector<double> r_input, r_forget, r_output, r_cell;
  std::vector<double> b_input, b_forget, b_output, b_cell;

  std::vector<double> w_dense1, b_dense1;  // dense1_units x (hidden + tabular_dim)
  std::vector<double> w_dense2, b_dense2;  // dense2_units x dense1_units
  std::vector<double> w_head, b_head;      // head_units x dense2_units

  std::size_t head_units() const { return head_mode == HeadMode::binary ? 1 : 3; }

  struct TensorRef {
    const char* name;
    std::vector<double>* data;
  };
  std::vector<TensorRef> tensors();
  std::vector<TensorRef> tensors() const;  // refs to const-cast data; read-only use
};

struct TrainConfig {
  double lr = 1e-3;
  std::size_t batch = 32;
  std::size_t max_epochs = 20;
  std::size_t patience = 3;  // epochs of non-improving validation loss
  double grad_clip = 5.0;    // global gradient-norm ceiling
  std::uint64_t seed = 0;
  HeadMode head_mode = HeadMode::three_class;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  ModelParameters params;  // best-validation-loss snapshot
  std::vector<EpochStats> history;
};

// Fresh parameters: embedding copied from the pre-trained matrix (trainable),
// gate/dense weights Xavier-uniform, biases zero except forget-gate bias 1.
ModelParameters init_params(const embeddings::EmbeddingMatrix& emb, std::uint64_t seed,
                            HeadMode head_mode = HeadMode::three_class);

// Same shapes as `like`, every entry zero. Used for gradients and moments.
ModelParameters zeros_like(const ModelParameters& like);

// Class probabilities for one example: size 3 (three_class) or 1 (binary,
// probability of the merged bullying class).
std::vector<double> forward(const ModelParameters& params, const features::FeatureVector& x);

// Mean cross-entropy over the batch plus gradients for every tensor
// (grads is overwritten). Labels are 0/1/2; binary mode folds 1 and 2
// into the positive class.
double loss_and_gradients(const ModelParameters& params,
                          const std::vector<const features::FeatureVector*>& xs,
                          const std::vector<int>& ys, ModelParameters& grads);

// The seeded 80/20 stratified split used by train(); exposed so evaluation
// can reconstruct the exact held-out set from the labels and the seed.
struct SplitIndices {
  std::vector<std::size_t> train, validation;
};
SplitIndices stratified_split(const std::vector<int>& ys, std::uint64_t seed);

// Adam training loop with a seeded 80/20 stratified split, per-epoch shuffle,
// global-norm gradient clipping and early stopping on validation loss.
TrainResult train(const ModelParameters& params0, const std::vector<features::FeatureVector>& xs,
                  const std::vector<int>& ys, const TrainConfig& cfg);

// ---------------------------------------------------------------------------
// Logistic-regression baseline over the 46-d tabular block only.

struct LogregModel {
  std::size_t classes = 3;
  std::size_t dim = features::kTabularDim;
  std::vector<double> weights;  // classes x dim
  std::vector<double> bias;     // classes
};

struct LogregConfig {
  double lr = 0.5;
  std::size_t max_iters = 300;
  std::uint64_t seed = 0;
};

LogregModel train_logreg(const std::vector<features::FeatureVector>& xs,
                         const std::vector<int>& ys, const LogregConfig& cfg);
std::vector<double> logreg_predict(const LogregModel& m, const std::vector<double>& tabular);

// ---------------------------------------------------------------------------
// Serialization ("BRNT" format, version 1).

void save_model(const ModelParameters& params, const std::string& path);
ModelParameters load_model(const std::string& path);

// Sequence ids for raw tokens using the model's own vocabulary.
std::vector<std::uint32_t> encode_with_model(const ModelParameters& params,
                                             const std::vector<std::string>& tokens);

}  // namespace bullyrank::net
