#pragma once

// Workspace orchestration. Each CLI subcommand maps to one stage function
// that loads its input artifacts from the workspace directory, writes its
// output artifacts there, and returns a JSON summary for display. Artifact
// file names are fixed so stages can find each other's outputs; a missing
// input raises an error naming the subcommand that produces it.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bullyrank/config.hpp"
#include "bullyrank/features.hpp"
#include "bullyrank/net.hpp"

namespace bullyrank::pipeline {

// Artifact file names inside the workspace.
inline constexpr const char* kCorpusFile = "corpus.jsonl";
inline constexpr const char* kLabelsFile = "labels.jsonl";
inline constexpr const char* kLabelStatsFile = "label_stats.json";
inline constexpr const char* kEmbeddingsFile = "embeddings.bin";
inline constexpr const char* kTopicsFile = "topics.bin";
inline constexpr const char* kFeaturesFile = "features.bin";
inline constexpr const char* kModelFile = "model.bin";
inline constexpr const char* kLogregFile = "logreg.bin";
inline constexpr const char* kHistoryFile = "history.csv";
inline constexpr const char* kMetricsLstmFile = "metrics_lstm.json";
inline constexpr const char* kMetricsLogregFile = "metrics_logreg.json";
inline constexpr const char* kExplanationsFile = "explanations.jsonl";
inline constexpr const char* kShapSummaryFile = "shap_summary.csv";
inline constexpr const char* kReportFile = "report.json";

struct StageContext {
  std::string workspace = ".";
  config::PipelineConfig cfg;
};

std::string artifact_path(const StageContext& ctx, const char* name);

// Throws when `path` does not exist, naming the subcommand that writes it.
void require_artifact(const std::string& path, const std::string& producer);

// The assembled model inputs with their labels and per-row identity,
// serialized as the features artifact ("BRFX" format, version 1).
struct FeatureTable {
  std::vector<features::FeatureVector> rows;
  std::vector<int> labels;
  std::vector<std::string> user_ids;
  std::vector<std::uint64_t> message_indices;  // position in the windowed message list
};

void save_features(const FeatureTable& table, const std::string& path);
FeatureTable load_features(const std::string& path);

// Logistic-regression artifact ("BRLR" format, version 1).
void save_logreg(const net::LogregModel& model, const std::string& path);
net::LogregModel load_logreg(const std::string& path);

// Stage functions, one per subcommand. All are deterministic under
// (workspace contents, configuration, seed).
nlohmann::ordered_json stage_generate(const StageContext& ctx);
nlohmann::ordered_json stage_label(const StageContext& ctx);
nlohmann::ordered_json stage_train_embeddings(const StageContext& ctx);
nlohmann::ordered_json stage_train_topics(const StageContext& ctx);
nlohmann::ordered_json stage_features(const StageContext& ctx);
// model: "lstm" or "logreg"
nlohmann::ordered_json stage_train(const StageContext& ctx, const std::string& model);
// split: "val", "train" or "all"
nlohmann::ordered_json stage_evaluate(const StageContext& ctx, const std::string& model,
                                      const std::string& split);
// rows: dataset rows to explain; empty selects the row with the highest
// predicted severe probability.
nlohmann::ordered_json stage_explain(const StageContext& ctx,
                                     const std::vector<std::size_t>& rows);
nlohmann::ordered_json stage_report(const StageContext& ctx);

// Plain-text rendering of a stage summary for --format text.
std::string render_summary(const nlohmann::ordered_json& summary);

}  // namespace bullyrank::pipeline
