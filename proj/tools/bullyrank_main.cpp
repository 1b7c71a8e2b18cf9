// Command-line front end: one subcommand per pipeline stage, sharing a
// workspace directory of artifacts and a key=value configuration file.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bullyrank/config.hpp"
#include "bullyrank/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "bullyrank: score message histories for bullying intensity, train and "
      "evaluate severity classifiers, and explain their predictions"};
  app.require_subcommand(1);
  // Let the shared flags (--config, --seed, ...) appear after the subcommand
  // too; subcommands inherit this setting.
  app.fallthrough();

  std::string config_path;
  std::string workspace = ".";
  std::string format = "text";
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "configuration file (key = value lines)");
  auto* seed_opt =
      app.add_option("--seed", seed, "root seed for every stage (overrides the configuration)");
  app.add_option("--workspace", workspace, "directory holding the pipeline artifacts")
      ->capture_default_str();
  app.add_option("--format", format, "summary output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  auto* cmd_generate = app.add_subcommand("generate", "write a seeded synthetic corpus");
  int users = 0;
  auto* users_opt = cmd_generate->add_option("--users", users, "number of users to generate");

  auto* cmd_label =
      app.add_subcommand("label", "score every message and assign severity labels");
  auto* cmd_embeddings =
      app.add_subcommand("train-embeddings", "train word embeddings on the corpus");
  auto* cmd_topics = app.add_subcommand("train-topics", "fit the topic model");
  auto* cmd_features =
      app.add_subcommand("features", "assemble tabular and sequence model inputs");

  auto* cmd_train = app.add_subcommand("train", "train a severity classifier");
  std::string train_model = "lstm";
  cmd_train->add_option("--model", train_model, "classifier to train")
      ->check(CLI::IsMember({"lstm", "logreg"}))
      ->capture_default_str();

  auto* cmd_evaluate = app.add_subcommand("evaluate", "score a trained classifier");
  std::string eval_model = "lstm";
  std::string split = "val";
  cmd_evaluate->add_option("--model", eval_model, "classifier to evaluate")
      ->check(CLI::IsMember({"lstm", "logreg"}))
      ->capture_default_str();
  cmd_evaluate->add_option("--split", split, "rows to score")
      ->check(CLI::IsMember({"val", "train", "all"}))
      ->capture_default_str();

  auto* cmd_explain = app.add_subcommand("explain", "explain network predictions");
  std::vector<std::size_t> rows;
  cmd_explain
      ->add_option("--rows", rows,
                   "dataset rows to explain (default: the strongest severe prediction)")
      ->delimiter(',');

  auto* cmd_report =
      app.add_subcommand("report", "assemble the user ranking and result report");

  CLI11_PARSE(app, argc, argv);

  try {
    bullyrank::pipeline::StageContext ctx;
    ctx.workspace = workspace;
    if (!config_path.empty()) ctx.cfg = bullyrank::config::load_config(config_path);
    if (seed_opt->count() > 0) ctx.cfg.seed = seed;

    nlohmann::ordered_json summary;
    if (cmd_generate->parsed()) {
      if (users_opt->count() > 0) ctx.cfg.generate_users = users;
      summary = bullyrank::pipeline::stage_generate(ctx);
    } else if (cmd_label->parsed()) {
      summary = bullyrank::pipeline::stage_label(ctx);
    } else if (cmd_embeddings->parsed()) {
      summary = bullyrank::pipeline::stage_train_embeddings(ctx);
    } else if (cmd_topics->parsed()) {
      summary = bullyrank::pipeline::stage_train_topics(ctx);
    } else if (cmd_features->parsed()) {
      summary = bullyrank::pipeline::stage_features(ctx);
    } else if (cmd_train->parsed()) {
      summary = bullyrank::pipeline::stage_train(ctx, train_model);
    } else if (cmd_evaluate->parsed()) {
      summary = bullyrank::pipeline::stage_evaluate(ctx, eval_model, split);
    } else if (cmd_explain->parsed()) {
      summary = bullyrank::pipeline::stage_explain(ctx, rows);
    } else if (cmd_report->parsed()) {
      summary = bullyrank::pipeline::stage_report(ctx);
    }

    if (format == "json")
      std::cout << summary.dump(2) << "\n";
    else
      std::cout << bullyrank::pipeline::render_summary(summary);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
