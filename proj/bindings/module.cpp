// Python bindings for the bullyrank core library.
//
// The module mirrors the CLI surface at two levels: fine-grained scoring
// primitives (preprocessing, sentiment, vulnerability, intensity classes)
// for interactive use, and `run_stage` which drives the same artifact
// pipeline as the command-line subcommands against a workspace directory.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bullyrank/affect.hpp"
#include "bullyrank/config.hpp"
#include "bullyrank/corpus.hpp"
#include "bullyrank/features.hpp"
#include "bullyrank/labeler.hpp"
#include "bullyrank/net.hpp"
#include "bullyrank/pipeline.hpp"
#include "bullyrank/textprep.hpp"
#include "bullyrank/vulnerability.hpp"

namespace py = pybind11;
using namespace bullyrank;

namespace {

const textprep::StopList& stops() {
  static const textprep::StopList s = textprep::StopList::load();
  return s;
}

const affect::Lexicons& lexicons() {
  static const affect::Lexicons l = affect::Lexicons::load();
  return l;
}

// Builds a UserProfile from a dict of the same field names / string forms
// used in corpus.jsonl. Missing keys keep the struct defaults.
corpus::UserProfile profile_from_dict(const py::dict& d) {
  corpus::UserProfile p;
  auto str = [&](const char* key) { return d[key].cast<std::string>(); };
  if (d.contains("user_id")) p.user_id = str("user_id");
  if (d.contains("age")) p.age = d["age"].cast<int>();
  if (d.contains("gender")) p.gender = corpus::gender_from_string(str("gender"));
  if (d.contains("race")) p.race = corpus::race_from_string(str("race"));
  if (d.contains("ethnicity"))
    p.ethnicity = corpus::ethnicity_from_string(str("ethnicity"));
  if (d.contains("depression")) p.depression = d["depression"].cast<bool>();
  if (d.contains("anxiety")) p.anxiety = d["anxiety"].cast<bool>();
  if (d.contains("self_esteem_issues"))
    p.self_esteem_issues = d["self_esteem_issues"].cast<bool>();
  if (d.contains("bullying_history"))
    p.bullying_history = corpus::bullying_history_from_string(str("bullying_history"));
  if (d.contains("disciplinary_issues"))
    p.disciplinary_issues = d["disciplinary_issues"].cast<bool>();
  if (d.contains("substance_abuse"))
    p.substance_abuse = d["substance_abuse"].cast<bool>();
  if (d.contains("internet_use"))
    p.internet_use = corpus::internet_use_from_string(str("internet_use"));
  return p;
}

py::object json_to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::object run_stage(const std::string& stage, const std::string& workspace,
                     py::object config, py::object seed, const std::string& model,
                     const std::string& split, const std::vector<std::size_t>& rows) {
  pipeline::StageContext ctx;
  ctx.workspace = workspace;
  if (!config.is_none()) {
    std::string text;
    for (auto item : config.cast<py::dict>()) {
      text += py::str(item.first).cast<std::string>();
      text += " = ";
      text += py::str(item.second).cast<std::string>();
      text += "\n";
    }
    ctx.cfg = config::parse_config(text, "<config>");
  }
  if (!seed.is_none()) ctx.cfg.seed = seed.cast<std::uint64_t>();

  nlohmann::ordered_json summary;
  if (stage == "generate") {
    summary = pipeline::stage_generate(ctx);
  } else if (stage == "label") {
    summary = pipeline::stage_label(ctx);
  } else if (stage == "train-embeddings") {
    summary = pipeline::stage_train_embeddings(ctx);
  } else if (stage == "train-topics") {
    summary = pipeline::stage_train_topics(ctx);
  } else if (stage == "features") {
    summary = pipeline::stage_features(ctx);
  } else if (stage == "train") {
    summary = pipeline::stage_train(ctx, model);
  } else if (stage == "evaluate") {
    summary = pipeline::stage_evaluate(ctx, model, split);
  } else if (stage == "explain") {
    summary = pipeline::stage_explain(ctx, rows);
  } else if (stage == "report") {
    summary = pipeline::stage_report(ctx);
  } else {
    throw std::invalid_argument("unknown stage: " + stage);
  }
  return json_to_py(summary);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cyberbullying severity pipeline: scoring primitives and stage runner.";

  m.def(
      "preprocess",
      [](const std::string& text) { return textprep::preprocess(text, stops()).tokens; },
      py::arg("text"),
      "Lowercase, expand contractions, strip punctuation/stopwords, and stem.");

  m.def("porter_stem", &textprep::porter_stem, py::arg("word"),
        "Porter-stem a single lowercase word.");

  m.def(
      "sentiment",
      [](const std::string& text) {
        affect::SentimentScores s = affect::score_sentiment(text, lexicons());
        py::dict d;
        d["neg"] = s.neg;
        d["neu"] = s.neu;
        d["pos"] = s.pos;
        d["compound"] = s.compound;
        return d;
      },
      py::arg("text"), "Valence scores (neg/neu/pos/compound) for a message.");

  m.def(
      "polarity_score",
      [](const std::string& text) {
        return affect::polarity_score(affect::score_sentiment(text, lexicons()));
      },
      py::arg("text"), "Polarity score in [0, 1]; higher means more negative.");

  m.def(
      "vulnerability_factor",
      [](const py::dict& profile) { return vulnerability::vf(profile_from_dict(profile)); },
      py::arg("profile"),
      "Weighted vulnerability factor for a user profile dict.");

  m.def(
      "classify_intensity",
      [](double bi) { return labeler::to_string(labeler::classify(bi)); },
      py::arg("bi"),
      "Map a normalized bullying-intensity score in [0, 1] to its severity label.");

  m.def("tabular_feature_names", &features::tabular_feature_names,
        "Column names of the tabular feature vector, in order.");

  m.def(
      "encode_user",
      [](const py::dict& profile) {
        auto arr = features::encode_user(profile_from_dict(profile)).to_array();
        return std::vector<double>(arr.begin(), arr.end());
      },
      py::arg("profile"), "Encode a user profile dict into its feature block.");

  py::class_<net::ModelParameters>(m, "Network",
                                   "A trained two-input LSTM classifier loaded from model.bin.")
      .def_static("load", &net::load_model, py::arg("path"),
                  "Load a trained model from a model.bin file.")
      .def(
          "predict",
          [](const net::ModelParameters& p, const std::vector<double>& tabular,
             const std::vector<std::string>& tokens) {
            features::FeatureVector x;
            x.tabular = tabular;
            x.sequence = net::encode_with_model(p, tokens);
            return net::forward(p, x);
          },
          py::arg("tabular"), py::arg("tokens"),
          "Class probabilities for a tabular vector plus preprocessed tokens.")
      .def_property_readonly(
          "head",
          [](const net::ModelParameters& p) {
            return std::string(p.head_mode == net::HeadMode::binary ? "binary"
                                                                    : "three_class");
          })
      .def_property_readonly(
          "vocabulary_size",
          [](const net::ModelParameters& p) { return p.terms.size(); });

  m.def("run_stage", &run_stage, py::arg("stage"), py::arg("workspace"),
        py::arg("config") = py::none(), py::arg("seed") = py::none(),
        py::arg("model") = "lstm", py::arg("split") = "val",
        py::arg("rows") = std::vector<std::size_t>{},
        "Run one pipeline stage against a workspace directory and return its "
        "summary as a dict. Stages: generate, label, train-embeddings, "
        "train-topics, features, train, evaluate, explain, report.");

  m.attr("__version__") = "0.1.0";
}
