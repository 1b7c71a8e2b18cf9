#include "bullyrank/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bullyrank::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

using Setter = std::function<void(PipelineConfig&, const std::string&)>;

template <typename T>
T parse_number(const std::string& raw);

template <>
double parse_number<double>(const std::string& raw) {
  std::size_t used = 0;
  double v = std::stod(raw, &used);
  if (used != raw.size()) throw std::invalid_argument(raw);
  return v;
}

// On this platform std::size_t and std::uint64_t are the same type; one
// unsigned specialization serves both.
template <>
std::uint64_t parse_number<std::uint64_t>(const std::string& raw) {
  if (!raw.empty() && raw[0] == '-') throw std::invalid_argument(raw);
  std::size_t used = 0;
  unsigned long long v = std::stoull(raw, &used);
  if (used != raw.size()) throw std::invalid_argument(raw);
  return static_cast<std::uint64_t>(v);
}

template <>
int parse_number<int>(const std::string& raw) {
  std::size_t used = 0;
  int v = std::stoi(raw, &used);
  if (used != raw.size()) throw std::invalid_argument(raw);
  return v;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"window_days", [](PipelineConfig& c, const std::string& v) { c.window_days = parse_number<int>(v); }},
      {"window_max_messages", [](PipelineConfig& c, const std::string& v) { c.window_max_messages = parse_number<std::size_t>(v); }},
      {"generate_users", [](PipelineConfig& c, const std::string& v) { c.generate_users = parse_number<int>(v); }},
      {"generate_min_messages", [](PipelineConfig& c, const std::string& v) { c.generate_min_messages = parse_number<int>(v); }},
      {"generate_max_messages", [](PipelineConfig& c, const std::string& v) { c.generate_max_messages = parse_number<int>(v); }},
      {"vf_age", [](PipelineConfig& c, const std::string& v) { c.vf.age = parse_number<double>(v); }},
      {"vf_gender", [](PipelineConfig& c, const std::string& v) { c.vf.gender = parse_number<double>(v); }},
      {"vf_race_ethnicity", [](PipelineConfig& c, const std::string& v) { c.vf.race_ethnicity = parse_number<double>(v); }},
      {"vf_history", [](PipelineConfig& c, const std::string& v) { c.vf.past_bullying = parse_number<double>(v); }},
      {"vf_internet", [](PipelineConfig& c, const std::string& v) { c.vf.internet_use = parse_number<double>(v); }},
      {"vf_internalizing", [](PipelineConfig& c, const std::string& v) { c.vf.internal_issues = parse_number<double>(v); }},
      {"vf_external", [](PipelineConfig& c, const std::string& v) { c.vf.external_issues = parse_number<double>(v); }},
      {"lsi_rank", [](PipelineConfig& c, const std::string& v) { c.lsi_rank = parse_number<std::size_t>(v); }},
      {"lsi_tau", [](PipelineConfig& c, const std::string& v) { c.lsi_tau = parse_number<double>(v); }},
      {"lsi_max_docs", [](PipelineConfig& c, const std::string& v) { c.lsi_max_docs = parse_number<std::size_t>(v); }},
      {"lda_topics", [](PipelineConfig& c, const std::string& v) { c.lda_topics = parse_number<std::size_t>(v); }},
      {"lda_alpha", [](PipelineConfig& c, const std::string& v) { c.lda_alpha = parse_number<double>(v); }},
      {"lda_beta", [](PipelineConfig& c, const std::string& v) { c.lda_beta = parse_number<double>(v); }},
      {"lda_train_sweeps", [](PipelineConfig& c, const std::string& v) { c.lda_train_sweeps = parse_number<std::size_t>(v); }},
      {"lda_infer_sweeps", [](PipelineConfig& c, const std::string& v) { c.lda_infer_sweeps = parse_number<std::size_t>(v); }},
      {"lda_min_posts", [](PipelineConfig& c, const std::string& v) { c.lda_min_posts = parse_number<std::size_t>(v); }},
      {"embed_dim", [](PipelineConfig& c, const std::string& v) { c.embed_dim = parse_number<std::size_t>(v); }},
      {"embed_window", [](PipelineConfig& c, const std::string& v) { c.embed_window = parse_number<std::size_t>(v); }},
      {"embed_negatives", [](PipelineConfig& c, const std::string& v) { c.embed_negatives = parse_number<std::size_t>(v); }},
      {"embed_epochs", [](PipelineConfig& c, const std::string& v) { c.embed_epochs = parse_number<std::size_t>(v); }},
      {"embed_lr", [](PipelineConfig& c, const std::string& v) { c.embed_lr = parse_number<double>(v); }},
      {"train_lr", [](PipelineConfig& c, const std::string& v) { c.train_lr = parse_number<double>(v); }},
      {"train_batch", [](PipelineConfig& c, const std::string& v) { c.train_batch = parse_number<std::size_t>(v); }},
      {"train_max_epochs", [](PipelineConfig& c, const std::string& v) { c.train_max_epochs = parse_number<std::size_t>(v); }},
      {"train_patience", [](PipelineConfig& c, const std::string& v) { c.train_patience = parse_number<std::size_t>(v); }},
      {"train_grad_clip", [](PipelineConfig& c, const std::string& v) { c.train_grad_clip = parse_number<double>(v); }},
      {"train_head", [](PipelineConfig& c, const std::string& v) {
         if (v != "three_class" && v != "binary")
           throw std::invalid_argument("must be three_class or binary");
         c.train_head = v;
       }},
      {"logreg_lr", [](PipelineConfig& c, const std::string& v) { c.logreg_lr = parse_number<double>(v); }},
      {"logreg_iters", [](PipelineConfig& c, const std::string& v) { c.logreg_iters = parse_number<std::size_t>(v); }},
      {"lime_samples", [](PipelineConfig& c, const std::string& v) { c.lime_samples = parse_number<std::size_t>(v); }},
      {"shap_instances", [](PipelineConfig& c, const std::string& v) { c.shap_instances = parse_number<std::size_t>(v); }},
      {"seed", [](PipelineConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>(v); }},
      {"data_dir", [](PipelineConfig& c, const std::string& v) { c.data_dir = v; }},
  };
  return table;
}

}  // namespace

PipelineConfig parse_config(const std::string& text, const std::string& where) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(where + ":" + std::to_string(lineno) +
                               ": expected `key = value`, got: " + s);
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end())
      throw std::runtime_error(where + ":" + std::to_string(lineno) +
                               ": unknown configuration key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ":" + std::to_string(lineno) + ": bad value for '" + key +
                               "': " + value);
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string render_config(const PipelineConfig& cfg) {
  std::string out;
  char buf[128];
  auto put_u = [&](const char* k, std::size_t v) {
    std::snprintf(buf, sizeof buf, "%s = %zu\n", k, v);
    out += buf;
  };
  auto put_i = [&](const char* k, long long v) {
    std::snprintf(buf, sizeof buf, "%s = %lld\n", k, v);
    out += buf;
  };
  auto put_d = [&](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", k, v);
    out += buf;
  };
  put_i("window_days", cfg.window_days);
  put_u("window_max_messages", cfg.window_max_messages);
  put_i("generate_users", cfg.generate_users);
  put_i("generate_min_messages", cfg.generate_min_messages);
  put_i("generate_max_messages", cfg.generate_max_messages);
  put_d("vf_age", cfg.vf.age);
  put_d("vf_gender", cfg.vf.gender);
  put_d("vf_race_ethnicity", cfg.vf.race_ethnicity);
  put_d("vf_history", cfg.vf.past_bullying);
  put_d("vf_internet", cfg.vf.internet_use);
  put_d("vf_internalizing", cfg.vf.internal_issues);
  put_d("vf_external", cfg.vf.external_issues);
  put_u("lsi_rank", cfg.lsi_rank);
  put_d("lsi_tau", cfg.lsi_tau);
  put_u("lsi_max_docs", cfg.lsi_max_docs);
  put_u("lda_topics", cfg.lda_topics);
  put_d("lda_alpha", cfg.lda_alpha);
  put_d("lda_beta", cfg.lda_beta);
  put_u("lda_train_sweeps", cfg.lda_train_sweeps);
  put_u("lda_infer_sweeps", cfg.lda_infer_sweeps);
  put_u("lda_min_posts", cfg.lda_min_posts);
  put_u("embed_dim", cfg.embed_dim);
  put_u("embed_window", cfg.embed_window);
  put_u("embed_negatives", cfg.embed_negatives);
  put_u("embed_epochs", cfg.embed_epochs);
  put_d("embed_lr", cfg.embed_lr);
  put_d("train_lr", cfg.train_lr);
  put_u("train_batch", cfg.train_batch);
  put_u("train_max_epochs", cfg.train_max_epochs);
  put_u("train_patience", cfg.train_patience);
  put_d("train_grad_clip", cfg.train_grad_clip);
  out += "train_head = " + cfg.train_head + "\n";
  put_d("logreg_lr", cfg.logreg_lr);
  put_u("logreg_iters", cfg.logreg_iters);
  put_u("lime_samples", cfg.lime_samples);
  put_u("shap_instances", cfg.shap_instances);
  std::snprintf(buf, sizeof buf, "seed = %llu\n", static_cast<unsigned long long>(cfg.seed));
  out += buf;
  out += "data_dir = " + cfg.data_dir + "\n";
  return out;
}

}  // namespace bullyrank::config
