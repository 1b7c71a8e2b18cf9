#include "bullyrank/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "bullyrank/binio.hpp"
#include "bullyrank/rng.hpp"

namespace bullyrank::net {

namespace {

double sigmoid(double z) {
  if (z >= 0) {
    double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

// y = W x + b with W row-major (rows x cols).
void affine(const std::vector<double>& w, const std::vector<double>& b, const double* x,
            std::size_t rows, std::size_t cols, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = b.empty() ? 0.0 : b[r];
    const double* wr = w.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

// d_x += W^T dz.
void add_transposed(const std::vector<double>& w, const double* dz, std::size_t rows,
                    std::size_t cols, double* d_x) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) d_x[c] += wr[c] * dz[r];
  }
}

// dW += dz (outer) x.
void add_outer(const double* dz, const double* x, std::size_t rows, std::size_t cols,
               std::vector<double>& dw) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* dwr = dw.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) dwr[c] += dz[r] * x[c];
  }
}

void add_vec(const double* dz, std::size_t n, std::vector<double>& db) {
  for (std::size_t r = 0; r < n; ++r) db[r] += dz[r];
}

void check_finite(const std::vector<double>& v, const char* layer) {
  for (double x : v)
    if (!std::isfinite(x))
      throw std::runtime_error(std::string("forward: non-finite activation in layer ") + layer);
}

// Sizes every tensor to match the dims, zero-filled.
void allocate(ModelParameters& p) {
  auto sz = [](std::vector<double>& v, std::size_t n) { v.assign(n, 0.0); };
  sz(p.embedding, p.vocab_rows * p.embed_dim);
  for (auto* w : {&p.w_input, &p.w_forget, &p.w_output, &p.w_cell}) sz(*w, p.hidden * p.embed_dim);
  for (auto* r : {&p.r_input, &p.r_forget, &p.r_output, &p.r_cell}) sz(*r, p.hidden * p.hidden);
  for (auto* b : {&p.b_input, &p.b_forget, &p.b_output, &p.b_cell}) sz(*b, p.hidden);
  sz(p.w_dense1, p.dense1_units * (p.hidden + p.tabular_dim));
  sz(p.b_dense1, p.dense1_units);
  sz(p.w_dense2, p.dense2_units * p.dense1_units);
  sz(p.b_dense2, p.dense2_units);
  sz(p.w_head, p.head_units() * p.dense2_units);
  sz(p.b_head, p.head_units());
}

// One recurrence step retained for backpropagation through time.
struct StepCache {
  std::uint32_t row = 0;  // embedding row feeding this step
  std::vector<double> gate_i, gate_f, gate_o, gate_g;
  std::vector<double> c, tanh_c, h_prev, c_prev;
};

struct ForwardCache {
  std::vector<StepCache> steps;  // non-padding timesteps only, in order
  std::vector<double> h_final, concat, z1, a1, z2, a2, logits, probs;
};

void run_forward(const ModelParameters& p, const features::FeatureVector& x, ForwardCache& fc,
                 bool keep_steps) {
  if (x.tabular.size() != p.tabular_dim)
    throw std::runtime_error("forward: tabular block has " + std::to_string(x.tabular.size()) +
                             " entries, model expects " + std::to_string(p.tabular_dim));
  const std::size_t H = p.hidden, D = p.embed_dim;
  std::vector<double> h(H, 0.0), c(H, 0.0);
  std::vector<double> zi(H), zf(H), zo(H), zg(H);
  fc.steps.clear();
  for (std::uint32_t id : x.sequence) {
    if (id == embeddings::kPadIndex) continue;  // padding is skipped by the recurrence
    if (id >= p.vocab_rows)
      throw std::runtime_error("forward: sequence id " + std::to_string(id) +
                               " outside the embedding table");
    const double* xt = p.embedding.data() + static_cast<std::size_t>(id) * D;
    affine(p.w_input, p.b_input, xt, H, D, zi.data());
    affine(p.w_forget, p.b_forget, xt, H, D, zf.data());
    affine(p.w_output, p.b_output, xt, H, D, zo.data());
    affine(p.w_cell, p.b_cell, xt, H, D, zg.data());
    for (std::size_t j = 0; j < H; ++j) {
      const double* ri = p.r_input.data() + j * H;
      const double* rf = p.r_forget.data() + j * H;
      const double* ro = p.r_output.data() + j * H;
      const double* rg = p.r_cell.data() + j * H;
      double ai = zi[j], af = zf[j], ao = zo[j], ag = zg[j];
      for (std::size_t k = 0; k < H; ++k) {
        ai += ri[k] * h[k];
        af += rf[k] * h[k];
        ao += ro[k] * h[k];
        ag += rg[k] * h[k];
      }
      zi[j] = ai;
      zf[j] = af;
      zo[j] = ao;
      zg[j] = ag;
    }
    StepCache sc;
    if (keep_steps) {
      sc.row = id;
      sc.h_prev = h;
      sc.c_prev = c;
    }
    std::vector<double> tanh_c(H);
    for (std::size_t j = 0; j < H; ++j) {
      double gi = sigmoid(zi[j]), gf = sigmoid(zf[j]), go = sigmoid(zo[j]);
      double gg = std::tanh(zg[j]);
      c[j] = gf * c[j] + gi * gg;
      tanh_c[j] = std::tanh(c[j]);
      h[j] = go * tanh_c[j];
      zi[j] = gi;  // reuse buffers to hold gate activations
      zf[j] = gf;
      zo[j] = go;
      zg[j] = gg;
    }
    if (keep_steps) {
      sc.gate_i = zi;
      sc.gate_f = zf;
      sc.gate_o = zo;
      sc.gate_g = zg;
      sc.c = c;
      sc.tanh_c = std::move(tanh_c);
      fc.steps.push_back(std::move(sc));
    }
  }
  check_finite(h, "lstm");
  fc.h_final = h;

  fc.concat.resize(H + p.tabular_dim);
  std::copy(h.begin(), h.end(), fc.concat.begin());
  std::copy(x.tabular.begin(), x.tabular.end(), fc.concat.begin() + static_cast<long>(H));

  fc.z1.resize(p.dense1_units);
  affine(p.w_dense1, p.b_dense1, fc.concat.data(), p.dense1_units, H + p.tabular_dim,
         fc.z1.data());
  check_finite(fc.z1, "dense1");
  fc.a1.resize(p.dense1_units);
  for (std::size_t j = 0; j < p.dense1_units; ++j) fc.a1[j] = std::max(0.0, fc.z1[j]);

  fc.z2.resize(p.dense2_units);
  affine(p.w_dense2, p.b_dense2, fc.a1.data(), p.dense2_units, p.dense1_units, fc.z2.data());
  check_finite(fc.z2, "dense2");
  fc.a2.resize(p.dense2_units);
  for (std::size_t j = 0; j < p.dense2_units; ++j) fc.a2[j] = std::max(0.0, fc.z2[j]);

  fc.logits.resize(p.head_units());
  affine(p.w_head, p.b_head, fc.a2.data(), p.head_units(), p.dense2_units, fc.logits.data());
  check_finite(fc.logits, "head");

  if (p.head_mode == HeadMode::binary) {
    fc.probs = {sigmoid(fc.logits[0])};
  } else {
    double mx = *std::max_element(fc.logits.begin(), fc.logits.end());
    fc.probs.resize(3);
    double sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      fc.probs[k] = std::exp(fc.logits[k] - mx);
      sum += fc.probs[k];
    }
    for (double& v : fc.probs) v /= sum;
  }
}

double example_loss(const ModelParameters& p, const ForwardCache& fc, int label) {
  constexpr double kFloor = 1e-12;
  if (p.head_mode == HeadMode::binary) {
    double prob = fc.probs[0];
    double y = label > 0 ? 1.0 : 0.0;
    return -(y * std::log(std::max(prob, kFloor)) +
             (1.0 - y) * std::log(std::max(1.0 - prob, kFloor)));
  }
  if (label < 0 || label > 2) throw std::runtime_error("loss: label outside {0,1,2}");
  return -std::log(std::max(fc.probs[static_cast<std::size_t>(label)], kFloor));
}

// Backpropagates one example into grads; d_logit scale carries the 1/batch factor.
void backward_example(const ModelParameters& p, const features::FeatureVector& x,
                      const ForwardCache& fc, int label, double scale, ModelParameters& g) {
  const std::size_t H = p.hidden, D = p.embed_dim;
  const std::size_t heads = p.head_units();

  std::vector<double> d_logits(heads);
  if (p.head_mode == HeadMode::binary) {
    double y = label > 0 ? 1.0 : 0.0;
    d_logits[0] = (fc.probs[0] - y) * scale;
  } else {
    for (std::size_t k = 0; k < 3; ++k)
      d_logits[k] = (fc.probs[k] - (static_cast<int>(k) == label ? 1.0 : 0.0)) * scale;
  }

  add_outer(d_logits.data(), fc.a2.data(), heads, p.dense2_units, g.w_head);
  add_vec(d_logits.data(), heads, g.b_head);
  std::vector<double> d_a2(p.dense2_units, 0.0);
  add_transposed(p.w_head, d_logits.data(), heads, p.dense2_units, d_a2.data());

  std::vector<double> d_z2(p.dense2_units);
  for (std::size_t j = 0; j < p.dense2_units; ++j) d_z2[j] = fc.z2[j] > 0 ? d_a2[j] : 0.0;
  add_outer(d_z2.data(), fc.a1.data(), p.dense2_units, p.dense1_units, g.w_dense2);
  add_vec(d_z2.data(), p.dense2_units, g.b_dense2);
  std::vector<double> d_a1(p.dense1_units, 0.0);
  add_transposed(p.w_dense2, d_z2.data(), p.dense2_units, p.dense1_units, d_a1.data());

  std::vector<double> d_z1(p.dense1_units);
  for (std::size_t j = 0; j < p.dense1_units; ++j) d_z1[j] = fc.z1[j] > 0 ? d_a1[j] : 0.0;
  add_outer(d_z1.data(), fc.concat.data(), p.dense1_units, H + p.tabular_dim, g.w_dense1);
  add_vec(d_z1.data(), p.dense1_units, g.b_dense1);
  std::vector<double> d_concat(H + p.tabular_dim, 0.0);
  add_transposed(p.w_dense1, d_z1.data(), p.dense1_units, H + p.tabular_dim, d_concat.data());

  std::vector<double> d_h(d_concat.begin(), d_concat.begin() + static_cast<long>(H));
  std::vector<double> d_c(H, 0.0);
  std::vector<double> d_zi(H), d_zf(H), d_zo(H), d_zg(H);
  for (auto it = fc.steps.rbegin(); it != fc.steps.rend(); ++it) {
    const StepCache& s = *it;
    for (std::size_t j = 0; j < H; ++j) {
      double tc = s.tanh_c[j];
      d_c[j] += d_h[j] * s.gate_o[j] * (1.0 - tc * tc);
      double d_o = d_h[j] * tc;
      d_zo[j] = d_o * s.gate_o[j] * (1.0 - s.gate_o[j]);
      double d_f = d_c[j] * s.c_prev[j];
      d_zf[j] = d_f * s.gate_f[j] * (1.0 - s.gate_f[j]);
      double d_i = d_c[j] * s.gate_g[j];
      d_zi[j] = d_i * s.gate_i[j] * (1.0 - s.gate_i[j]);
      double d_g = d_c[j] * s.gate_i[j];
      d_zg[j] = d_g * (1.0 - s.gate_g[j] * s.gate_g[j]);
    }
    const double* xt = p.embedding.data() + static_cast<std::size_t>(s.row) * D;
    add_outer(d_zi.data(), xt, H, D, g.w_input);
    add_outer(d_zf.data(), xt, H, D, g.w_forget);
    add_outer(d_zo.data(), xt, H, D, g.w_output);
    add_outer(d_zg.data(), xt, H, D, g.w_cell);
    add_outer(d_zi.data(), s.h_prev.data(), H, H, g.r_input);
    add_outer(d_zf.data(), s.h_prev.data(), H, H, g.r_forget);
    add_outer(d_zo.data(), s.h_prev.data(), H, H, g.r_output);
    add_outer(d_zg.data(), s.h_prev.data(), H, H, g.r_cell);
    add_vec(d_zi.data(), H, g.b_input);
    add_vec(d_zf.data(), H, g.b_forget);
    add_vec(d_zo.data(), H, g.b_output);
    add_vec(d_zg.data(), H, g.b_cell);

    double* d_row = g.embedding.data() + static_cast<std::size_t>(s.row) * D;
    add_transposed(p.w_input, d_zi.data(), H, D, d_row);
    add_transposed(p.w_forget, d_zf.data(), H, D, d_row);
    add_transposed(p.w_output, d_zo.data(), H, D, d_row);
    add_transposed(p.w_cell, d_zg.data(), H, D, d_row);

    std::fill(d_h.begin(), d_h.end(), 0.0);
    add_transposed(p.r_input, d_zi.data(), H, H, d_h.data());
    add_transposed(p.r_forget, d_zf.data(), H, H, d_h.data());
    add_transposed(p.r_output, d_zo.data(), H, H, d_h.data());
    add_transposed(p.r_cell, d_zg.data(), H, H, d_h.data());
    for (std::size_t j = 0; j < H; ++j) d_c[j] *= s.gate_f[j];
  }
  (void)x;
}

double global_norm(const ModelParameters& g) {
  double ss = 0.0;
  for (const auto& t : g.tensors())
    for (double v : *t.data) ss += v * v;
  return std::sqrt(ss);
}

struct AdamState {
  ModelParameters m, v;
  std::uint64_t step = 0;
};

void adam_step(ModelParameters& p, const ModelParameters& g, AdamState& st, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8) {
  ++st.step;
  auto pt = p.tensors();
  auto gt = g.tensors();
  auto mt = st.m.tensors();
  auto vt = st.v.tensors();
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(st.step));
  for (std::size_t t = 0; t < pt.size(); ++t) {
    auto& pv = *pt[t].data;
    auto& gv = *gt[t].data;
    auto& mv = *mt[t].data;
    auto& vv = *vt[t].data;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      mv[i] = beta1 * mv[i] + (1.0 - beta1) * gv[i];
      vv[i] = beta2 * vv[i] + (1.0 - beta2) * gv[i] * gv[i];
      pv[i] -= lr * (mv[i] / bc1) / (std::sqrt(vv[i] / bc2) + eps);
    }
  }
}

double evaluate_split(const ModelParameters& p, const std::vector<features::FeatureVector>& xs,
                      const std::vector<int>& ys, const std::vector<std::size_t>& idx,
                      double& accuracy) {
  double loss = 0.0;
  std::size_t correct = 0;
  ForwardCache fc;
  for (std::size_t i : idx) {
    run_forward(p, xs[i], fc, false);
    loss += example_loss(p, fc, ys[i]);
    if (p.head_mode == HeadMode::binary) {
      int pred = fc.probs[0] >= 0.5 ? 1 : 0;
      if (pred == (ys[i] > 0 ? 1 : 0)) ++correct;
    } else {
      std::size_t pred = static_cast<std::size_t>(
          std::max_element(fc.probs.begin(), fc.probs.end()) - fc.probs.begin());
      if (static_cast<int>(pred) == ys[i]) ++correct;
    }
  }
  accuracy = idx.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(idx.size());
  return idx.empty() ? 0.0 : loss / static_cast<double>(idx.size());
}

std::vector<double> softmax_vec(const std::vector<double>& z) {
  double mx = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    p[k] = std::exp(z[k] - mx);
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace

std::vector<ModelParameters::TensorRef> ModelParameters::tensors() {
  return {
      {"embedding", &embedding}, {"w_input", &w_input},   {"w_forget", &w_forget},
      {"w_output", &w_output},   {"w_cell", &w_cell},     {"r_input", &r_input},
      {"r_forget", &r_forget},   {"r_output", &r_output}, {"r_cell", &r_cell},
      {"b_input", &b_input},     {"b_forget", &b_forget}, {"b_output", &b_output},
      {"b_cell", &b_cell},       {"w_dense1", &w_dense1}, {"b_dense1", &b_dense1},
      {"w_dense2", &w_dense2},   {"b_dense2", &b_dense2}, {"w_head", &w_head},
      {"b_head", &b_head},
  };
}

std::vector<ModelParameters::TensorRef> ModelParameters::tensors() const {
  return const_cast<ModelParameters*>(this)->tensors();
}

ModelParameters init_params(const embeddings::EmbeddingMatrix& emb, std::uint64_t seed,
                            HeadMode head_mode) {
  ModelParameters p;
  p.head_mode = head_mode;
  p.vocab_rows = emb.vectors.size();
  p.embed_dim = emb.dim;
  p.terms = emb.terms;
  allocate(p);
  for (std::size_t r = 0; r < p.vocab_rows; ++r)
    for (std::size_t d = 0; d < p.embed_dim; ++d) p.embedding[r * p.embed_dim + d] =
        emb.vectors[r][d];

  Rng rng(stage_seed(seed, "net/init"));
  auto xavier = [&rng](std::vector<double>& w, std::size_t fan_in, std::size_t fan_out) {
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : w) v = rng.uniform(-limit, limit);
  };
  for (auto* w : {&p.w_input, &p.w_forget, &p.w_output, &p.w_cell})
    xavier(*w, p.embed_dim, p.hidden);
  for (auto* r : {&p.r_input, &p.r_forget, &p.r_output, &p.r_cell}) xavier(*r, p.hidden, p.hidden);
  std::fill(p.b_forget.begin(), p.b_forget.end(), 1.0);  // open the forget gate at start
  xavier(p.w_dense1, p.hidden + p.tabular_dim, p.dense1_units);
  xavier(p.w_dense2, p.dense1_units, p.dense2_units);
  xavier(p.w_head, p.dense2_units, p.head_units());
  return p;
}

ModelParameters zeros_like(const ModelParameters& like) {
  ModelParameters z;
  z.head_mode = like.head_mode;
  z.vocab_rows = like.vocab_rows;
  z.embed_dim = like.embed_dim;
  z.hidden = like.hidden;
  z.tabular_dim = like.tabular_dim;
  z.dense1_units = like.dense1_units;
  z.dense2_units = like.dense2_units;
  allocate(z);
  return z;
}

std::vector<double> forward(const ModelParameters& params, const features::FeatureVector& x) {
  ForwardCache fc;
  run_forward(params, x, fc, false);
  return fc.probs;
}

double loss_and_gradients(const ModelParameters& params,
                          const std::vector<const features::FeatureVector*>& xs,
                          const std::vector<int>& ys, ModelParameters& grads) {
  if (xs.empty() || xs.size() != ys.size())
    throw std::runtime_error("loss_and_gradients: batch empty or label count mismatch");
  grads = zeros_like(params);
  const double scale = 1.0 / static_cast<double>(xs.size());
  double total = 0.0;
  ForwardCache fc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    run_forward(params, *xs[i], fc, true);
    total += example_loss(params, fc, ys[i]);
    backward_example(params, *xs[i], fc, ys[i], scale, grads);
  }
  return total * scale;
}

SplitIndices stratified_split(const std::vector<int>& ys, std::uint64_t seed) {
  // One fifth of each class (at least one example when the class has two or
  // more) goes to validation.
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ys.size(); ++i) by_class[ys[i]].push_back(i);
  Rng split_rng(stage_seed(seed, "net/split"));
  SplitIndices split;
  for (auto& [label, idx] : by_class) {
    split_rng.shuffle(idx);
    std::size_t n_val = idx.size() >= 2 ? std::max<std::size_t>(1, idx.size() / 5) : 0;
    for (std::size_t i = 0; i < idx.size(); ++i)
      (i < n_val ? split.validation : split.train).push_back(idx[i]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

TrainResult train(const ModelParameters& params0, const std::vector<features::FeatureVector>& xs,
                  const std::vector<int>& ys, const TrainConfig& cfg) {
  if (xs.size() != ys.size()) throw std::runtime_error("train: feature/label count mismatch");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ys.size(); ++i) by_class[ys[i]].push_back(i);
  if (by_class.size() < 2)
    throw std::runtime_error("train: need at least two classes in the training data");

  auto split = stratified_split(ys, cfg.seed);
  std::vector<std::size_t> train_idx = std::move(split.train);
  std::vector<std::size_t> val_idx = std::move(split.validation);
  if (val_idx.empty()) val_idx = train_idx;  // degenerate tiny datasets

  TrainResult result;
  ModelParameters params = params0;
  ModelParameters grads;
  AdamState adam;
  adam.m = zeros_like(params);
  adam.v = zeros_like(params);

  Rng shuffle_rng(stage_seed(cfg.seed, "net/shuffle"));
  double best_val = std::numeric_limits<double>::infinity();
  result.params = params;
  std::size_t stale = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle_rng.shuffle(train_idx);
    double train_loss = 0.0;
    for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch) {
      std::size_t end = std::min(train_idx.size(), start + cfg.batch);
      std::vector<const features::FeatureVector*> bx;
      std::vector<int> by;
      for (std::size_t i = start; i < end; ++i) {
        bx.push_back(&xs[train_idx[i]]);
        by.push_back(ys[train_idx[i]]);
      }
      double loss = loss_and_gradients(params, bx, by, grads);
      train_loss += loss * static_cast<double>(bx.size());
      if (cfg.grad_clip > 0) {
        double norm = global_norm(grads);
        if (norm > cfg.grad_clip) {
          double s = cfg.grad_clip / norm;
          for (auto& t : grads.tensors())
            for (double& v : *t.data) v *= s;
        }
      }
      adam_step(params, grads, adam, cfg.lr);
    }
    train_loss /= static_cast<double>(train_idx.size());

    EpochStats es;
    es.epoch = epoch;
    es.train_loss = train_loss;
    es.val_loss = evaluate_split(params, xs, ys, val_idx, es.val_accuracy);
    result.history.push_back(es);

    if (es.val_loss < best_val - 1e-12) {
      best_val = es.val_loss;
      result.params = params;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  return result;
}

LogregModel train_logreg(const std::vector<features::FeatureVector>& xs,
                         const std::vector<int>& ys, const LogregConfig& cfg) {
  (void)cfg.seed;  // zero initialization keeps the convex fit deterministic
  if (xs.empty() || xs.size() != ys.size())
    throw std::runtime_error("train_logreg: empty data or label count mismatch");
  std::map<int, std::size_t> classes_seen;
  int max_label = 0;
  for (int y : ys) {
    if (y < 0) throw std::runtime_error("train_logreg: negative label");
    classes_seen[y]++;
    max_label = std::max(max_label, y);
  }
  if (classes_seen.size() < 2)
    throw std::runtime_error("train_logreg: need at least two classes in the training data");

  LogregModel m;
  m.classes = static_cast<std::size_t>(max_label) + 1;
  m.dim = xs[0].tabular.size();
  m.weights.assign(m.classes * m.dim, 0.0);
  m.bias.assign(m.classes, 0.0);

  const double inv_n = 1.0 / static_cast<double>(xs.size());
  std::vector<double> gw(m.classes * m.dim), gb(m.classes), z(m.classes);
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto& x = xs[i].tabular;
      if (x.size() != m.dim) throw std::runtime_error("train_logreg: inconsistent feature width");
      affine(m.weights, m.bias, x.data(), m.classes, m.dim, z.data());
      auto p = softmax_vec(z);
      for (std::size_t k = 0; k < m.classes; ++k) {
        double g = (p[k] - (static_cast<int>(k) == ys[i] ? 1.0 : 0.0)) * inv_n;
        gb[k] += g;
        double* row = gw.data() + k * m.dim;
        for (std::size_t d = 0; d < m.dim; ++d) row[d] += g * x[d];
      }
    }
    for (std::size_t j = 0; j < gw.size(); ++j) m.weights[j] -= cfg.lr * gw[j];
    for (std::size_t k = 0; k < m.classes; ++k) m.bias[k] -= cfg.lr * gb[k];
  }
  return m;
}

std::vector<double> logreg_predict(const LogregModel& m, const std::vector<double>& tabular) {
  if (tabular.size() != m.dim)
    throw std::runtime_error("logreg_predict: feature width mismatch");
  std::vector<double> z(m.classes);
  affine(m.weights, m.bias, tabular.data(), m.classes, m.dim, z.data());
  return softmax_vec(z);
}

void save_model(const ModelParameters& p, const std::string& path) {
  BinWriter w(path);
  w.magic("BRNT");
  w.u32(1);
  w.u32(p.head_mode == HeadMode::binary ? 1u : 0u);
  w.u64(p.vocab_rows);
  w.u64(p.embed_dim);
  w.u64(p.hidden);
  w.u64(p.tabular_dim);
  w.u64(p.dense1_units);
  w.u64(p.dense2_units);
  w.u64(p.terms.size());
  for (const auto& t : p.terms) w.str(t);
  for (const auto& t : p.tensors()) w.f64s(*t.data);
}

ModelParameters load_model(const std::string& path) {
  BinReader r(path);
  r.expect_magic("BRNT");
  std::uint32_t version = r.u32();
  if (version != 1)
    throw std::runtime_error(path + ": unsupported model format version " +
                             std::to_string(version));
  ModelParameters p;
  p.head_mode = r.u32() == 1u ? HeadMode::binary : HeadMode::three_class;
  p.vocab_rows = r.u64();
  p.embed_dim = r.u64();
  p.hidden = r.u64();
  p.tabular_dim = r.u64();
  p.dense1_units = r.u64();
  p.dense2_units = r.u64();
  std::uint64_t n_terms = r.u64();
  p.terms.reserve(n_terms);
  for (std::uint64_t i = 0; i < n_terms; ++i) p.terms.push_back(r.str());
  if (p.terms.size() + 2 != p.vocab_rows)
    throw std::runtime_error(path + ": vocabulary size does not match the embedding table");
  ModelParameters shape = zeros_like(p);
  for (auto& t : p.tensors()) {
    *t.data = r.f64s();
  }
  for (std::size_t i = 0; i < shape.tensors().size(); ++i) {
    auto want = shape.tensors()[i].data->size();
    auto got = p.tensors()[i].data->size();
    if (want != got)
      throw std::runtime_error(path + ": tensor " + shape.tensors()[i].name +
                               " has wrong size");
  }
  return p;
}

std::vector<std::uint32_t> encode_with_model(const ModelParameters& params,
                                             const std::vector<std::string>& tokens) {
  std::vector<std::uint32_t> ids;
  ids.reserve(features::kSequenceLen);
  for (const auto& tok : tokens) {
    if (ids.size() == features::kSequenceLen) break;
    auto it = std::lower_bound(params.terms.begin(), params.terms.end(), tok);
    if (it != params.terms.end() && *it == tok)
      ids.push_back(static_cast<std::uint32_t>(it - params.terms.begin()) + 2u);
    else
      ids.push_back(embeddings::kOovIndex);
  }
  ids.resize(features::kSequenceLen, embeddings::kPadIndex);
  return ids;
}

}  // namespace bullyrank::net
