#include "bullyrank/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bullyrank/affect.hpp"
#include "bullyrank/binio.hpp"
#include "bullyrank/corpus.hpp"
#include "bullyrank/embeddings.hpp"
#include "bullyrank/explain.hpp"
#include "bullyrank/labeler.hpp"
#include "bullyrank/metrics.hpp"
#include "bullyrank/rng.hpp"
#include "bullyrank/semantics.hpp"
#include "bullyrank/textprep.hpp"
#include "bullyrank/topics.hpp"

namespace bullyrank::pipeline {

using nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json_file(const std::string& path, const ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  ordered_json j;
  in >> j;
  return j;
}

void ensure_workspace(const StageContext& ctx) {
  std::filesystem::create_directories(ctx.workspace);
}

// The dataset every stage actually works on: the stored corpus with each
// user's history cut to the configured window, anchored at the newest
// timestamp present anywhere in the corpus.
std::vector<corpus::UserRecord> load_windowed(const StageContext& ctx) {
  auto path = artifact_path(ctx, kCorpusFile);
  require_artifact(path, "generate");
  auto records = corpus::load_dataset(path, corpus::DatasetFormat::json_lines);
  std::int64_t now = 0;
  for (const auto& r : records)
    for (const auto& m : r.messages) now = std::max(now, m.timestamp);
  corpus::WindowConfig window{ctx.cfg.window_days,
                              static_cast<int>(ctx.cfg.window_max_messages)};
  for (auto& r : records) r = corpus::apply_window(r, window, now);
  return records;
}

std::vector<textprep::TokenizedText> preprocess_all(
    const std::vector<corpus::UserRecord>& records, const textprep::StopList& stops) {
  std::vector<textprep::TokenizedText> docs;
  for (const auto& r : records)
    for (const auto& m : r.messages) docs.push_back(textprep::preprocess(m.text, stops));
  return docs;
}

struct LabelRow {
  std::string user_id;
  std::uint64_t message_index = 0;
  double bi = 0.0;
  int label = 0;
};

std::vector<LabelRow> load_label_rows(const StageContext& ctx) {
  auto path = artifact_path(ctx, kLabelsFile);
  require_artifact(path, "label");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<LabelRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
      LabelRow r;
      r.user_id = j.at("user_id").get<std::string>();
      r.message_index = j.at("message_index").get<std::uint64_t>();
      r.bi = j.at("bi").get<double>();
      r.label = static_cast<int>(
          labeler::severity_from_string(j.at("label").get<std::string>()));
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad label record: " + e.what());
    }
  }
  return rows;
}

net::HeadMode head_mode_from_config(const config::PipelineConfig& cfg) {
  return cfg.train_head == "binary" ? net::HeadMode::binary : net::HeadMode::three_class;
}

std::vector<std::string> class_names(net::HeadMode head) {
  if (head == net::HeadMode::binary) return {"not_bullying", "bullying"};
  return {"not_bullying", "mild_bullying", "severe_bullying"};
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(
      std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::string artifact_path(const StageContext& ctx, const char* name) {
  return (std::filesystem::path(ctx.workspace) / name).string();
}

void require_artifact(const std::string& path, const std::string& producer) {
  if (!std::filesystem::exists(path))
    throw std::runtime_error("missing artifact " + path + "; run `bullyrank " + producer +
                             "` first");
}

void save_features(const FeatureTable& table, const std::string& path) {
  const std::size_t n = table.rows.size();
  if (table.labels.size() != n || table.user_ids.size() != n ||
      table.message_indices.size() != n)
    throw std::runtime_error("feature table columns disagree on the row count");
  BinWriter w(path);
  w.magic("BRFX");
  w.u32(1);
  w.u64(n);
  w.u64(features::kTabularDim);
  w.u64(features::kSequenceLen);
  std::vector<double> tabular;
  tabular.reserve(n * features::kTabularDim);
  std::vector<std::uint32_t> sequences;
  sequences.reserve(n * features::kSequenceLen);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& fv = table.rows[i];
    if (fv.tabular.size() != features::kTabularDim ||
        fv.sequence.size() != features::kSequenceLen)
      throw std::runtime_error("feature row " + std::to_string(i) + " has the wrong shape");
    tabular.insert(tabular.end(), fv.tabular.begin(), fv.tabular.end());
    sequences.insert(sequences.end(), fv.sequence.begin(), fv.sequence.end());
    labels[i] = static_cast<std::uint32_t>(table.labels[i]);
  }
  w.f64s(tabular);
  w.u32s(sequences);
  w.u32s(labels);
  for (std::size_t i = 0; i < n; ++i) {
    w.str(table.user_ids[i]);
    w.u64(table.message_indices[i]);
  }
}

FeatureTable load_features(const std::string& path) {
  BinReader r(path);
  r.expect_magic("BRFX");
  if (std::uint32_t v = r.u32(); v != 1)
    throw std::runtime_error(path + ": unsupported feature-table version " + std::to_string(v));
  const std::size_t n = r.u64();
  const std::size_t tab_dim = r.u64();
  const std::size_t seq_len = r.u64();
  if (tab_dim != features::kTabularDim || seq_len != features::kSequenceLen)
    throw std::runtime_error(path + ": unexpected feature dimensions");
  auto tabular = r.f64s();
  auto sequences = r.u32s();
  auto labels = r.u32s();
  if (tabular.size() != n * tab_dim || sequences.size() != n * seq_len || labels.size() != n)
    throw std::runtime_error(path + ": truncated feature table");
  FeatureTable table;
  table.rows.resize(n);
  table.labels.resize(n);
  table.user_ids.resize(n);
  table.message_indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    table.rows[i].tabular.assign(tabular.begin() + static_cast<std::ptrdiff_t>(i * tab_dim),
                                 tabular.begin() + static_cast<std::ptrdiff_t>((i + 1) * tab_dim));
    table.rows[i].sequence.assign(
        sequences.begin() + static_cast<std::ptrdiff_t>(i * seq_len),
        sequences.begin() + static_cast<std::ptrdiff_t>((i + 1) * seq_len));
    table.labels[i] = static_cast<int>(labels[i]);
    table.user_ids[i] = r.str();
    table.message_indices[i] = r.u64();
  }
  return table;
}

void save_logreg(const net::LogregModel& model, const std::string& path) {
  BinWriter w(path);
  w.magic("BRLR");
  w.u32(1);
  w.u64(model.classes);
  w.u64(model.dim);
  w.f64s(model.weights);
  w.f64s(model.bias);
}

net::LogregModel load_logreg(const std::string& path) {
  BinReader r(path);
  r.expect_magic("BRLR");
  if (std::uint32_t v = r.u32(); v != 1)
    throw std::runtime_error(path + ": unsupported baseline-model version " + std::to_string(v));
  net::LogregModel m;
  m.classes = r.u64();
  m.dim = r.u64();
  m.weights = r.f64s();
  m.bias = r.f64s();
  if (m.weights.size() != m.classes * m.dim || m.bias.size() != m.classes)
    throw std::runtime_error(path + ": truncated baseline model");
  return m;
}

nlohmann::ordered_json stage_generate(const StageContext& ctx) {
  ensure_workspace(ctx);
  corpus::GeneratorOptions opts;
  opts.min_messages = ctx.cfg.generate_min_messages;
  opts.max_messages = ctx.cfg.generate_max_messages;
  opts.data_dir = ctx.cfg.data_dir;
  auto records = corpus::generate_synthetic(ctx.cfg.generate_users, ctx.cfg.seed, opts);
  auto path = artifact_path(ctx, kCorpusFile);
  corpus::save_dataset(path, records, corpus::DatasetFormat::json_lines);
  std::size_t messages = 0;
  for (const auto& r : records) messages += r.messages.size();
  ordered_json summary;
  summary["stage"] = "generate";
  summary["users"] = records.size();
  summary["messages"] = messages;
  summary["corpus"] = path;
  return summary;
}

nlohmann::ordered_json stage_label(const StageContext& ctx) {
  ensure_workspace(ctx);
  auto records = load_windowed(ctx);
  auto stops = textprep::StopList::load(ctx.cfg.data_dir);

  labeler::CalibrationConfig cal;
  cal.lsi_rank = ctx.cfg.lsi_rank;
  cal.tau = ctx.cfg.lsi_tau;
  cal.max_lsi_docs = ctx.cfg.lsi_max_docs;
  cal.seed = ctx.cfg.seed;
  cal.weights = ctx.cfg.vf;
  cal.data_dir = ctx.cfg.data_dir;
  auto scorer = labeler::calibrate(records, stops, cal);

  labeler::NormStats stats;
  auto labeled = labeler::label_corpus(records, scorer, stops, &stats);

  std::string lines;
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& lm : labeled) {
    ordered_json j;
    j["user_id"] = lm.user_id;
    j["message_index"] = lm.message_index;
    j["ps"] = lm.score.ps;
    j["ss"] = lm.score.ss;
    j["vf"] = lm.score.vf;
    j["s_total"] = lm.score.s_total;
    j["bi"] = lm.score.bi;
    j["label"] = labeler::to_string(lm.score.label);
    lines += j.dump() + "\n";
    counts[static_cast<int>(lm.score.label)]++;
  }
  write_text_file(artifact_path(ctx, kLabelsFile), lines);

  ordered_json stats_json;
  stats_json["messages"] = labeled.size();
  stats_json["users"] = records.size();
  stats_json["window"] = {{"days", ctx.cfg.window_days},
                          {"max_messages", ctx.cfg.window_max_messages}};
  stats_json["score_min"] = stats.min;
  stats_json["score_max"] = stats.max;
  stats_json["keywords"] = scorer.keywords.entries.size();
  stats_json["counts"] = {{"not_bullying", counts[0]},
                          {"mild_bullying", counts[1]},
                          {"severe_bullying", counts[2]}};
  write_json_file(artifact_path(ctx, kLabelStatsFile), stats_json);

  ordered_json summary;
  summary["stage"] = "label";
  summary["messages"] = labeled.size();
  summary["not_bullying"] = counts[0];
  summary["mild_bullying"] = counts[1];
  summary["severe_bullying"] = counts[2];
  summary["score_min"] = stats.min;
  summary["score_max"] = stats.max;
  summary["labels"] = artifact_path(ctx, kLabelsFile);
  return summary;
}

nlohmann::ordered_json stage_train_embeddings(const StageContext& ctx) {
  ensure_workspace(ctx);
  auto records = load_windowed(ctx);
  auto stops = textprep::StopList::load(ctx.cfg.data_dir);
  auto docs = preprocess_all(records, stops);

  embeddings::CbowConfig cfg;
  cfg.dim = ctx.cfg.embed_dim;
  cfg.window = ctx.cfg.embed_window;
  cfg.negatives = ctx.cfg.embed_negatives;
  cfg.epochs = ctx.cfg.embed_epochs;
  cfg.lr = ctx.cfg.embed_lr;
  embeddings::TrainStats stats;
  auto emb = embeddings::train_cbow(docs, cfg, ctx.cfg.seed, &stats);
  auto path = artifact_path(ctx, kEmbeddingsFile);
  embeddings::save_embeddings(emb, path);

  ordered_json summary;
  summary["stage"] = "train-embeddings";
  summary["documents"] = docs.size();
  summary["vocabulary"] = emb.terms.size();
  summary["dimension"] = emb.dim;
  if (!stats.epoch_loss.empty()) summary["final_epoch_loss"] = stats.epoch_loss.back();
  summary["embeddings"] = path;
  return summary;
}

nlohmann::ordered_json stage_train_topics(const StageContext& ctx) {
  ensure_workspace(ctx);
  auto records = load_windowed(ctx);
  auto stops = textprep::StopList::load(ctx.cfg.data_dir);
  auto docs = preprocess_all(records, stops);

  topics::LdaConfig cfg;
  cfg.n_topics = ctx.cfg.lda_topics;
  cfg.alpha = ctx.cfg.lda_alpha;
  cfg.beta = ctx.cfg.lda_beta;
  cfg.train_sweeps = ctx.cfg.lda_train_sweeps;
  cfg.infer_sweeps = ctx.cfg.lda_infer_sweeps;
  cfg.min_posts = ctx.cfg.lda_min_posts;
  auto model = topics::fit_lda(docs, cfg, ctx.cfg.seed);
  auto path = artifact_path(ctx, kTopicsFile);
  topics::save_lda(model, path);

  ordered_json summary;
  summary["stage"] = "train-topics";
  summary["documents"] = docs.size();
  summary["topics"] = model.cfg.n_topics;
  summary["vocabulary"] = model.terms.size();
  auto words = topics::top_words(model, 5);
  auto preview = ordered_json::array();
  for (std::size_t t = 0; t < words.size() && t < 5; ++t) {
    std::string joined;
    for (const auto& w : words[t]) {
      if (!joined.empty()) joined += " ";
      joined += w;
    }
    preview.push_back(joined);
  }
  summary["top_words"] = preview;
  summary["model"] = path;
  return summary;
}

nlohmann::ordered_json stage_features(const StageContext& ctx) {
  ensure_workspace(ctx);
  auto records = load_windowed(ctx);
  auto label_rows = load_label_rows(ctx);
  require_artifact(artifact_path(ctx, kEmbeddingsFile), "train-embeddings");
  auto emb = embeddings::load_embeddings(artifact_path(ctx, kEmbeddingsFile));
  require_artifact(artifact_path(ctx, kTopicsFile), "train-topics");
  auto lda = topics::load_lda(artifact_path(ctx, kTopicsFile));
  if (lda.cfg.n_topics != features::kTopicDim)
    throw std::runtime_error("topic model has " + std::to_string(lda.cfg.n_topics) +
                             " topics; the tabular layout needs exactly " +
                             std::to_string(features::kTopicDim));
  auto stops = textprep::StopList::load(ctx.cfg.data_dir);
  auto lex = affect::Lexicons::load(ctx.cfg.data_dir);

  FeatureTable table;
  std::size_t k = 0;
  for (const auto& record : records) {
    auto user = features::encode_user(record.profile);
    for (std::size_t i = 0; i < record.messages.size(); ++i, ++k) {
      if (k >= label_rows.size())
        throw std::runtime_error(
            "labels artifact has fewer rows than the corpus has messages; re-run `bullyrank "
            "label`");
      const auto& lr = label_rows[k];
      if (lr.user_id != record.profile.user_id || lr.message_index != i)
        throw std::runtime_error(
            "labels artifact is out of step with the corpus at row " + std::to_string(k) +
            " (expected " + record.profile.user_id + "/" + std::to_string(i) + ", found " +
            lr.user_id + "/" + std::to_string(lr.message_index) +
            "); re-run `bullyrank label`");
      const auto& msg = record.messages[i];
      auto tokens = textprep::preprocess(msg.text, stops);
      auto emotion = affect::emotion_features(msg.text, tokens, lex);
      auto topic = topics::infer_topics(lda, tokens);
      auto sequence = features::encode_sequence(tokens, emb);
      table.rows.push_back(features::assemble(emotion, topic, user, sequence));
      table.labels.push_back(lr.label);
      table.user_ids.push_back(record.profile.user_id);
      table.message_indices.push_back(i);
    }
  }
  if (k != label_rows.size())
    throw std::runtime_error(
        "labels artifact has more rows than the corpus has messages; re-run `bullyrank label`");
  auto path = artifact_path(ctx, kFeaturesFile);
  save_features(table, path);

  std::size_t counts[3] = {0, 0, 0};
  for (int y : table.labels)
    if (y >= 0 && y < 3) counts[y]++;
  ordered_json summary;
  summary["stage"] = "features";
  summary["rows"] = table.rows.size();
  summary["tabular_dim"] = features::kTabularDim;
  summary["sequence_len"] = features::kSequenceLen;
  summary["not_bullying"] = counts[0];
  summary["mild_bullying"] = counts[1];
  summary["severe_bullying"] = counts[2];
  summary["features"] = path;
  return summary;
}

nlohmann::ordered_json stage_train(const StageContext& ctx, const std::string& model) {
  ensure_workspace(ctx);
  auto features_path = artifact_path(ctx, kFeaturesFile);
  require_artifact(features_path, "features");
  auto table = load_features(features_path);

  ordered_json summary;
  summary["stage"] = "train";
  summary["model"] = model;
  summary["rows"] = table.rows.size();

  if (model == "lstm") {
    require_artifact(artifact_path(ctx, kEmbeddingsFile), "train-embeddings");
    auto emb = embeddings::load_embeddings(artifact_path(ctx, kEmbeddingsFile));
    auto head = head_mode_from_config(ctx.cfg);
    auto params0 = net::init_params(emb, ctx.cfg.seed, head);

    net::TrainConfig cfg;
    cfg.lr = ctx.cfg.train_lr;
    cfg.batch = ctx.cfg.train_batch;
    cfg.max_epochs = ctx.cfg.train_max_epochs;
    cfg.patience = ctx.cfg.train_patience;
    cfg.grad_clip = ctx.cfg.train_grad_clip;
    cfg.seed = ctx.cfg.seed;
    cfg.head_mode = head;
    auto result = net::train(params0, table.rows, table.labels, cfg);

    auto model_path = artifact_path(ctx, kModelFile);
    net::save_model(result.params, model_path);

    std::string csv = "epoch,train_loss,val_loss,val_accuracy\n";
    for (const auto& e : result.history)
      csv += std::to_string(e.epoch) + "," + fmt_double(e.train_loss) + "," +
             fmt_double(e.val_loss) + "," + fmt_double(e.val_accuracy) + "\n";
    write_text_file(artifact_path(ctx, kHistoryFile), csv);

    const auto best = std::min_element(
        result.history.begin(), result.history.end(),
        [](const auto& a, const auto& b) { return a.val_loss < b.val_loss; });
    summary["head"] = ctx.cfg.train_head;
    summary["epochs_run"] = result.history.size();
    summary["best_epoch"] = best->epoch;
    summary["best_val_loss"] = best->val_loss;
    summary["best_val_accuracy"] = best->val_accuracy;
    summary["model_file"] = model_path;
    summary["history"] = artifact_path(ctx, kHistoryFile);
  } else if (model == "logreg") {
    net::LogregConfig cfg;
    cfg.lr = ctx.cfg.logreg_lr;
    cfg.max_iters = ctx.cfg.logreg_iters;
    cfg.seed = ctx.cfg.seed;
    auto lr_model = net::train_logreg(table.rows, table.labels, cfg);
    auto path = artifact_path(ctx, kLogregFile);
    save_logreg(lr_model, path);
    summary["classes"] = lr_model.classes;
    summary["model_file"] = path;
  } else {
    throw std::runtime_error("unknown model '" + model + "' (expected lstm or logreg)");
  }
  return summary;
}

nlohmann::ordered_json stage_evaluate(const StageContext& ctx, const std::string& model,
                                      const std::string& split) {
  ensure_workspace(ctx);
  auto features_path = artifact_path(ctx, kFeaturesFile);
  require_artifact(features_path, "features");
  auto table = load_features(features_path);

  auto indices_of = [&]() {
    std::vector<std::size_t> idx;
    if (split == "all") {
      idx.resize(table.rows.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      return idx;
    }
    auto parts = net::stratified_split(table.labels, ctx.cfg.seed);
    if (split == "train") return parts.train;
    if (split == "val") return parts.validation;
    throw std::runtime_error("unknown split '" + split + "' (expected val, train or all)");
  };
  auto idx = indices_of();
  if (idx.empty()) throw std::runtime_error("the " + split + " split is empty");

  std::vector<int> pred, truth;
  net::HeadMode head = net::HeadMode::three_class;
  std::size_t n_classes = 3;
  if (model == "lstm") {
    auto model_path = artifact_path(ctx, kModelFile);
    require_artifact(model_path, "train --model lstm");
    auto params = net::load_model(model_path);
    head = params.head_mode;
    n_classes = head == net::HeadMode::binary ? 2 : 3;
    for (auto i : idx) {
      auto p = net::forward(params, table.rows[i]);
      if (head == net::HeadMode::binary) {
        pred.push_back(p[0] >= 0.5 ? 1 : 0);
        truth.push_back(table.labels[i] > 0 ? 1 : 0);
      } else {
        pred.push_back(static_cast<int>(argmax(p)));
        truth.push_back(table.labels[i]);
      }
    }
  } else if (model == "logreg") {
    auto model_path = artifact_path(ctx, kLogregFile);
    require_artifact(model_path, "train --model logreg");
    auto lr_model = load_logreg(model_path);
    n_classes = lr_model.classes;
    for (auto i : idx) {
      pred.push_back(static_cast<int>(argmax(net::logreg_predict(lr_model, table.rows[i].tabular))));
      truth.push_back(table.labels[i]);
    }
  } else {
    throw std::runtime_error("unknown model '" + model + "' (expected lstm or logreg)");
  }

  auto report = metrics::compute_metrics(pred, truth, n_classes);
  auto names = n_classes == 2 ? class_names(net::HeadMode::binary)
                              : class_names(net::HeadMode::three_class);

  ordered_json out;
  out["model"] = model;
  out["split"] = split;
  out["n"] = report.total;
  out["accuracy"] = report.accuracy;
  out["macro_precision"] = report.macro_precision;
  out["macro_recall"] = report.macro_recall;
  out["macro_f1"] = report.macro_f1;
  auto per_class = ordered_json::array();
  for (std::size_t c = 0; c < report.n_classes; ++c) {
    std::size_t support = 0;
    for (std::size_t j = 0; j < report.n_classes; ++j) support += report.confusion[c][j];
    per_class.push_back(ordered_json{{"name", names[c]},
                                     {"precision", report.precision[c]},
                                     {"recall", report.recall[c]},
                                     {"f1", report.f1[c]},
                                     {"support", support}});
  }
  out["per_class"] = per_class;
  out["confusion"] = report.confusion;
  auto metrics_path =
      artifact_path(ctx, model == "lstm" ? kMetricsLstmFile : kMetricsLogregFile);
  write_json_file(metrics_path, out);

  ordered_json summary = out;
  summary["stage"] = "evaluate";
  summary["metrics_file"] = metrics_path;
  return summary;
}

nlohmann::ordered_json stage_explain(const StageContext& ctx,
                                     const std::vector<std::size_t>& rows) {
  ensure_workspace(ctx);
  auto features_path = artifact_path(ctx, kFeaturesFile);
  require_artifact(features_path, "features");
  auto table = load_features(features_path);
  auto model_path = artifact_path(ctx, kModelFile);
  require_artifact(model_path, "train --model lstm");
  auto params = net::load_model(model_path);
  const bool binary = params.head_mode == net::HeadMode::binary;
  // The class whose probability the explanations track: the severe class, or
  // the single bullying output of a binary head.
  const int severity_class = binary ? 0 : 2;

  auto records = load_windowed(ctx);
  std::map<std::pair<std::string, std::uint64_t>, const corpus::Message*> text_of;
  for (const auto& r : records)
    for (std::size_t i = 0; i < r.messages.size(); ++i)
      text_of[{r.profile.user_id, i}] = &r.messages[i];
  auto stops = textprep::StopList::load(ctx.cfg.data_dir);

  std::vector<std::size_t> selected = rows;
  if (selected.empty()) {
    std::size_t best = 0;
    double best_p = -1.0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      auto p = net::forward(params, table.rows[i]);
      double severe = binary ? p[0] : p[2];
      if (severe > best_p) {
        best_p = severe;
        best = i;
      }
    }
    selected.push_back(best);
  }
  for (auto r : selected)
    if (r >= table.rows.size())
      throw std::runtime_error("row " + std::to_string(r) + " is out of range (dataset has " +
                               std::to_string(table.rows.size()) + " rows)");

  std::string lines;
  auto local_reports = ordered_json::array();
  for (auto r : selected) {
    const auto& fv = table.rows[r];
    auto probs = net::forward(params, fv);
    int target = binary ? 0 : static_cast<int>(argmax(probs));
    auto key = std::make_pair(table.user_ids[r], table.message_indices[r]);
    auto found = text_of.find(key);
    if (found == text_of.end())
      throw std::runtime_error("row " + std::to_string(r) +
                               " not found in the corpus; re-run `bullyrank features`");
    auto tokens = textprep::preprocess(found->second->text, stops);

    explain::MixedPredictor f = [&](const std::vector<std::string>& toks,
                                    const std::vector<double>& tabular) {
      features::FeatureVector q;
      q.tabular = tabular;
      q.sequence = net::encode_with_model(params, toks);
      auto p = net::forward(params, q);
      return binary ? p[0] : p[static_cast<std::size_t>(target)];
    };
    auto ex = explain::lime_explain(f, tokens, fv.tabular, ctx.cfg.lime_samples,
                                    stage_seed(ctx.cfg.seed, "explain/row-" + std::to_string(r)),
                                    target);

    ordered_json j;
    j["row"] = r;
    j["user_id"] = table.user_ids[r];
    j["message_index"] = table.message_indices[r];
    j["label"] = table.labels[r];
    j["probabilities"] = probs;
    j["target_class"] = target;
    j["fidelity"] = ex.fidelity;
    auto attr = ordered_json::array();
    for (const auto& a : ex.attributions)
      attr.push_back(ordered_json{{"token", a.name}, {"weight", a.weight}});
    j["attributions"] = attr;
    lines += j.dump() + "\n";

    ordered_json brief;
    brief["row"] = r;
    brief["target_class"] = target;
    brief["fidelity"] = ex.fidelity;
    if (!ex.attributions.empty()) {
      brief["top_token"] = ex.attributions.front().name;
      brief["top_weight"] = ex.attributions.front().weight;
    }
    local_reports.push_back(brief);
  }
  write_text_file(artifact_path(ctx, kExplanationsFile), lines);

  std::vector<std::vector<double>> tabulars;
  tabulars.reserve(table.rows.size());
  for (const auto& fv : table.rows) tabulars.push_back(fv.tabular);
  explain::IndexedTabularPredictor g = [&](std::size_t instance,
                                           const std::vector<double>& tabular) {
    features::FeatureVector q;
    q.tabular = tabular;
    q.sequence = table.rows[instance].sequence;
    auto p = net::forward(params, q);
    return binary ? p[0] : p[static_cast<std::size_t>(severity_class)];
  };
  auto shap = explain::shapley_summary(g, tabulars, ctx.cfg.shap_instances, ctx.cfg.seed);

  std::string csv = "player,instance,value\n";
  for (const auto& player : shap.players)
    for (std::size_t i = 0; i < player.per_instance.size(); ++i)
      csv += player.name + "," + std::to_string(shap.instance_ids[i]) + "," +
             fmt_double(player.per_instance[i]) + "\n";
  write_text_file(artifact_path(ctx, kShapSummaryFile), csv);

  ordered_json summary;
  summary["stage"] = "explain";
  summary["rows_explained"] = local_reports;
  summary["shap_instances"] = shap.instance_ids.size();
  auto ranking = ordered_json::array();
  for (const auto& player : shap.players)
    ranking.push_back(
        ordered_json{{"player", player.name}, {"mean_abs_value", player.mean_abs_weight}});
  summary["shap_ranking"] = ranking;
  summary["explanations"] = artifact_path(ctx, kExplanationsFile);
  summary["shap_summary"] = artifact_path(ctx, kShapSummaryFile);
  return summary;
}

nlohmann::ordered_json stage_report(const StageContext& ctx) {
  ensure_workspace(ctx);
  auto stats_path = artifact_path(ctx, kLabelStatsFile);
  require_artifact(stats_path, "label");
  auto label_stats = read_json_file(stats_path);
  auto rows = load_label_rows(ctx);

  struct UserAgg {
    std::size_t messages = 0;
    double bi_sum = 0.0;
    double bi_max = 0.0;
    std::size_t counts[3] = {0, 0, 0};
  };
  std::map<std::string, UserAgg> agg;
  for (const auto& r : rows) {
    auto& a = agg[r.user_id];
    a.messages++;
    a.bi_sum += r.bi;
    a.bi_max = std::max(a.bi_max, r.bi);
    if (r.label >= 0 && r.label < 3) a.counts[r.label]++;
  }
  std::vector<std::pair<std::string, const UserAgg*>> order;
  for (const auto& [id, a] : agg) order.emplace_back(id, &a);
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    double mx = x.second->bi_sum / static_cast<double>(x.second->messages);
    double my = y.second->bi_sum / static_cast<double>(y.second->messages);
    if (mx != my) return mx > my;
    return x.first < y.first;
  });

  ordered_json report;
  report["dataset"] = label_stats;
  auto ranking = ordered_json::array();
  for (const auto& [id, a] : order) {
    double mean_bi = a->bi_sum / static_cast<double>(a->messages);
    ranking.push_back(
        ordered_json{{"user_id", id},
                     {"messages", a->messages},
                     {"mean_intensity", mean_bi},
                     {"intensity_percent", static_cast<int>(std::lround(mean_bi * 100.0))},
                     {"max_intensity", a->bi_max},
                     {"severe_messages", a->counts[2]},
                     {"mild_messages", a->counts[1]}});
  }
  report["user_ranking"] = ranking;

  if (std::filesystem::exists(artifact_path(ctx, kMetricsLstmFile)))
    report["lstm_metrics"] = read_json_file(artifact_path(ctx, kMetricsLstmFile));
  if (std::filesystem::exists(artifact_path(ctx, kMetricsLogregFile)))
    report["logreg_metrics"] = read_json_file(artifact_path(ctx, kMetricsLogregFile));

  if (std::filesystem::exists(artifact_path(ctx, kExplanationsFile))) {
    std::ifstream in(artifact_path(ctx, kExplanationsFile), std::ios::binary);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) ++n;
    report["explained_rows"] = n;
  }
  if (std::filesystem::exists(artifact_path(ctx, kShapSummaryFile))) {
    std::ifstream in(artifact_path(ctx, kShapSummaryFile), std::ios::binary);
    std::string line;
    std::getline(in, line);  // header
    std::map<std::string, std::pair<double, std::size_t>> sums;
    std::vector<std::string> first_seen;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto c1 = line.find(',');
      auto c2 = line.find(',', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::runtime_error(artifact_path(ctx, kShapSummaryFile) + ": malformed row");
      std::string player = line.substr(0, c1);
      double value = std::stod(line.substr(c2 + 1));
      if (sums.find(player) == sums.end()) first_seen.push_back(player);
      auto& s = sums[player];
      s.first += std::abs(value);
      s.second++;
    }
    auto shap = ordered_json::array();
    for (const auto& player : first_seen) {
      const auto& s = sums[player];
      shap.push_back(ordered_json{
          {"player", player}, {"mean_abs_value", s.first / static_cast<double>(s.second)}});
    }
    report["shap_players"] = shap;
  }

  auto path = artifact_path(ctx, kReportFile);
  write_json_file(path, report);

  ordered_json summary;
  summary["stage"] = "report";
  summary["users_ranked"] = ranking.size();
  if (!order.empty()) {
    summary["highest_intensity_user"] = order.front().first;
    summary["highest_mean_intensity"] =
        order.front().second->bi_sum / static_cast<double>(order.front().second->messages);
  }
  summary["report"] = path;
  return summary;
}

namespace {

void render_value(const ordered_json& v, const std::string& indent, std::string& out);

void render_object(const ordered_json& obj, const std::string& indent, std::string& out) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object() || (value.is_array() && !value.empty() && value[0].is_object())) {
      out += indent + key + ":\n";
      render_value(value, indent + "  ", out);
    } else {
      out += indent + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) +
             "\n";
    }
  }
}

void render_value(const ordered_json& v, const std::string& indent, std::string& out) {
  if (v.is_object()) {
    render_object(v, indent, out);
  } else if (v.is_array()) {
    for (const auto& item : v) {
      if (item.is_object()) {
        out += indent + "-\n";
        render_object(item, indent + "  ", out);
      } else {
        out += indent + "- " +
               (item.is_string() ? item.get<std::string>() : item.dump()) + "\n";
      }
    }
  } else {
    out += indent + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  }
}

}  // namespace

std::string render_summary(const nlohmann::ordered_json& summary) {
  std::string out;
  render_value(summary, "", out);
  return out;
}

}  // namespace bullyrank::pipeline
