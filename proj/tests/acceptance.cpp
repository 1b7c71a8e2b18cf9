// Acceptance harness: ten end-to-end criteria, one pass/fail line each.
// Each criterion builds its own fixtures and, where a numeric result is
// involved, checks the pipeline against an independent straight-line
// recomputation rather than against the code under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bullyrank/affect.hpp"
#include "bullyrank/corpus.hpp"
#include "bullyrank/embeddings.hpp"
#include "bullyrank/explain.hpp"
#include "bullyrank/features.hpp"
#include "bullyrank/labeler.hpp"
#include "bullyrank/metrics.hpp"
#include "bullyrank/net.hpp"
#include "bullyrank/pipeline.hpp"
#include "bullyrank/rng.hpp"
#include "bullyrank/semantics.hpp"
#include "bullyrank/textprep.hpp"
#include "bullyrank/topics.hpp"
#include "bullyrank/vulnerability.hpp"

using namespace bullyrank;
using nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct TempDir {
  std::string path;
  explicit TempDir(const std::string& tag) {
    path = (std::filesystem::temp_directory_path() / ("bullyrank_accept_" + tag)).string();
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: the labeling pipeline against a short brute-force recomputation
// on a 400-user corpus. The block between the BEGIN/END markers is the entire
// independent oracle (well under 100 lines): it re-reads the stored corpus,
// re-applies the window, recomputes every component score from the calibrated
// tables, and redoes the normalization and the thirds rule from scratch.

struct OracleRow {
  std::string user_id;
  std::size_t message_index;
  double ps, ss, vf, s_total, bi;
  int label;
};

// ----- BEGIN brute-force labeling oracle (59 lines) -----
std::vector<OracleRow> brute_force_labels(const std::string& corpus_path,
                                          const labeler::CalibratedScorer& scorer,
                                          const textprep::StopList& stops) {
  auto records = corpus::load_dataset(corpus_path, corpus::DatasetFormat::json_lines);

  // window: newest timestamp anywhere is "now"; keep 90 days / last 100
  std::int64_t now = 0;
  for (const auto& r : records)
    for (const auto& m : r.messages) now = std::max(now, m.timestamp);
  for (auto& r : records) r = corpus::apply_window(r, {90, 100}, now);

  // component scores per message, in record x message order
  std::vector<OracleRow> rows;
  for (const auto& r : records) {
    const double user_vf = vulnerability::vf(r.profile, scorer.weights);
    for (std::size_t i = 0; i < r.messages.size(); ++i) {
      const auto& text = r.messages[i].text;
      auto tokens = textprep::preprocess(text, stops);
      OracleRow row;
      row.user_id = r.profile.user_id;
      row.message_index = i;
      row.ps = affect::polarity_score(affect::score_sentiment(text, scorer.lexicons));
      row.ss = semantics::semantic_score(tokens, scorer.keywords, scorer.corpus_max);
      row.vf = user_vf;
      row.s_total = row.ps + row.ss + row.vf;
      rows.push_back(row);
    }
  }

  // min-max normalization over the whole corpus
  double lo = rows.front().s_total, hi = rows.front().s_total;
  for (const auto& r : rows) {
    lo = std::min(lo, r.s_total);
    hi = std::max(hi, r.s_total);
  }
  for (auto& r : rows) {
    r.bi = hi > lo ? (r.s_total - lo) / (hi - lo) : 0.0;
    r.bi = std::min(1.0, std::max(0.0, r.bi));
    r.label = r.bi < 1.0 / 3.0 ? 0 : (r.bi < 2.0 / 3.0 ? 1 : 2);
  }
  return rows;
}
// ----- END brute-force labeling oracle -----

bool criterion_1(std::string& detail) {
  auto t0 = Clock::now();
  TempDir ws("c1");
  pipeline::StageContext ctx;
  ctx.workspace = ws.path;
  ctx.cfg.generate_users = 400;
  ctx.cfg.seed = 3;
  pipeline::stage_generate(ctx);
  pipeline::stage_label(ctx);

  auto stops = textprep::StopList::load();
  auto records = corpus::load_dataset(pipeline::artifact_path(ctx, pipeline::kCorpusFile),
                                      corpus::DatasetFormat::json_lines);
  std::int64_t now = 0;
  for (const auto& r : records)
    for (const auto& m : r.messages) now = std::max(now, m.timestamp);
  for (auto& r : records) r = corpus::apply_window(r, {90, 100}, now);
  labeler::CalibrationConfig cal;
  cal.seed = ctx.cfg.seed;
  auto scorer = labeler::calibrate(records, stops, cal);

  auto oracle = brute_force_labels(pipeline::artifact_path(ctx, pipeline::kCorpusFile), scorer,
                                   stops);

  std::ifstream in(pipeline::artifact_path(ctx, pipeline::kLabelsFile));
  std::string line;
  std::size_t k = 0, mismatches = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (k >= oracle.size()) return detail = "pipeline produced extra rows", false;
    auto j = ordered_json::parse(line);
    const auto& o = oracle[k];
    auto close = [&](const char* key, double want) {
      double got = j.at(key).get<double>();
      worst = std::max(worst, std::fabs(got - want));
      return std::fabs(got - want) <= 1e-9;
    };
    bool ok = j.at("user_id").get<std::string>() == o.user_id &&
              j.at("message_index").get<std::size_t>() == o.message_index &&
              close("ps", o.ps) && close("ss", o.ss) && close("vf", o.vf) &&
              close("s_total", o.s_total) && close("bi", o.bi) &&
              static_cast<int>(labeler::severity_from_string(
                  j.at("label").get<std::string>())) == o.label;
    if (!ok) ++mismatches;
    ++k;
  }
  double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu messages, %zu mismatches, worst delta %.2e, %.1fs", k,
                mismatches, worst, secs);
  detail = buf;
  return k == oracle.size() && mismatches == 0 && secs < 60.0;
}

// ---------------------------------------------------------------------------
// Criterion 2: the pinned intensity -> severity fixtures.

bool criterion_2(std::string& detail) {
  using labeler::SeverityLabel;
  const std::pair<double, SeverityLabel> fixtures[] = {
      {0.84, SeverityLabel::SevereBullying}, {0.23, SeverityLabel::NotBullying},
      {0.54, SeverityLabel::MildBullying},   {0.62, SeverityLabel::MildBullying},
      {0.69, SeverityLabel::SevereBullying}, {0.72, SeverityLabel::SevereBullying},
      {0.11, SeverityLabel::NotBullying},
  };
  std::size_t pass = 0;
  for (const auto& [bi, want] : fixtures)
    if (labeler::classify(bi) == want) ++pass;
  detail = std::to_string(pass) + "/7 fixtures";
  return pass == 7;
}

// ---------------------------------------------------------------------------
// Criterion 3: vulnerability factor over all 2^7 condition combinations plus
// the reference profile.

bool criterion_3(std::string& detail) {
  const double weights[7] = {0.04, 0.12, 0.02, 0.42, 0.17, 0.28, 0.21};
  double total = 0.0;
  for (double w : weights) total += w;
  std::size_t pass = 0;
  for (unsigned mask = 0; mask < 128; ++mask) {
    corpus::UserProfile p;
    p.user_id = "m";
    p.age = (mask & 1u) ? 13 : 20;
    p.gender = (mask & 2u) ? corpus::Gender::female : corpus::Gender::male;
    p.race = (mask & 4u) ? corpus::Race::nonwhite : corpus::Race::white;
    p.bullying_history =
        (mask & 8u) ? corpus::BullyingHistory::within_1_month : corpus::BullyingHistory::none;
    p.internet_use =
        (mask & 16u) ? corpus::InternetUse::gt_6h_daily : corpus::InternetUse::lt_1h_weekly;
    p.depression = (mask & 32u) != 0;
    p.disciplinary_issues = (mask & 64u) != 0;
    double want = 0.0;
    for (int b = 0; b < 7; ++b)
      if (mask & (1u << b)) want += weights[b];
    want /= total;
    if (std::fabs(vulnerability::vf(p) - want) < 1e-12) ++pass;
  }

  corpus::UserProfile ref;
  ref.user_id = "User0";
  ref.age = 13;
  ref.gender = corpus::Gender::female;
  ref.self_esteem_issues = true;
  ref.disciplinary_issues = true;
  bool ref_ok = std::fabs(vulnerability::vf(ref) - 0.5159) <= 1e-4;

  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu/128 combinations, reference profile %.6f", pass,
                vulnerability::vf(ref));
  detail = buf;
  return pass == 128 && ref_ok;
}

// ---------------------------------------------------------------------------
// Criterion 4: analytic gradients against central finite differences on every
// tensor of a small model, ten seeds.

net::ModelParameters small_model(std::uint64_t seed) {
  net::ModelParameters p;
  p.vocab_rows = 5;
  p.embed_dim = 4;
  p.hidden = 3;
  p.tabular_dim = 5;
  p.dense1_units = 4;
  p.dense2_units = 3;
  p.embedding.resize(5 * 4);
  p.w_input.resize(3 * 4);
  p.w_forget.resize(3 * 4);
  p.w_output.resize(3 * 4);
  p.w_cell.resize(3 * 4);
  p.r_input.resize(3 * 3);
  p.r_forget.resize(3 * 3);
  p.r_output.resize(3 * 3);
  p.r_cell.resize(3 * 3);
  p.b_input.resize(3);
  p.b_forget.resize(3);
  p.b_output.resize(3);
  p.b_cell.resize(3);
  p.w_dense1.resize(4 * (3 + 5));
  p.b_dense1.resize(4);
  p.w_dense2.resize(3 * 4);
  p.b_dense2.resize(3);
  p.w_head.resize(3 * 3);
  p.b_head.resize(3);
  Rng rng(seed);
  for (auto& t : p.tensors())
    for (auto& v : *t.data) v = rng.uniform(-0.5, 0.5);
  return p;
}

features::FeatureVector fv(std::vector<double> tab, std::vector<std::uint32_t> seq) {
  features::FeatureVector x;
  x.tabular = std::move(tab);
  x.sequence = std::move(seq);
  return x;
}

bool criterion_4(std::string& detail) {
  auto t0 = Clock::now();
  const double eps = 1e-4;
  std::vector<features::FeatureVector> ex = {
      fv({0.1, -0.2, 0.3, 0.0, 0.5}, {2, 3, 0, 0, 0, 0}),
      fv({-0.4, 0.2, 0.1, 0.9, -0.3}, {4, 2, 3, 2, 4, 3}),
      fv({0.6, 0.1, -0.5, 0.2, 0.0}, {0, 0, 0, 0, 0, 0}),
  };
  std::vector<const features::FeatureVector*> xs = {&ex[0], &ex[1], &ex[2]};
  std::vector<int> ys = {0, 1, 2};

  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto p = small_model(seed);
    net::ModelParameters analytic;
    net::loss_and_gradients(p, xs, ys, analytic);
    net::ModelParameters scratch;
    auto pt = p.tensors();
    auto at = analytic.tensors();
    for (std::size_t t = 0; t < pt.size(); ++t) {
      for (std::size_t i = 0; i < pt[t].data->size(); ++i) {
        double saved = (*pt[t].data)[i];
        (*pt[t].data)[i] = saved + eps;
        double up = net::loss_and_gradients(p, xs, ys, scratch);
        (*pt[t].data)[i] = saved - eps;
        double down = net::loss_and_gradients(p, xs, ys, scratch);
        (*pt[t].data)[i] = saved;
        double numeric = (up - down) / (2.0 * eps);
        double a = (*at[t].data)[i];
        double rel = std::fabs(a - numeric) / std::max(std::fabs(a) + std::fabs(numeric), 1e-4);
        worst = std::max(worst, rel);
      }
    }
  }
  double secs = seconds_since(t0);
  char buf[96];
  std::snprintf(buf, sizeof buf, "max relative error %.2e over 10 seeds, %.1fs", worst, secs);
  detail = buf;
  return worst < 1e-4 && secs < 120.0;
}

// ---------------------------------------------------------------------------
// Criterion 5: on a separable benchmark where only the token sequences
// distinguish the two bullying classes, the network must reach 90%
// validation accuracy and beat the tabular-only baseline on macro F1.

embeddings::EmbeddingMatrix toy_embeddings(std::size_t n_terms, std::size_t dim,
                                           std::uint64_t seed) {
  embeddings::EmbeddingMatrix emb;
  emb.dim = dim;
  Rng rng(seed);
  for (std::size_t i = 0; i < n_terms; ++i) {
    std::string t(1, static_cast<char>('a' + i));
    emb.terms.push_back(t);
    emb.vocabulary[t] = i + 2;
  }
  emb.vectors.assign(n_terms + 2, std::vector<double>(dim, 0.0));
  for (std::size_t r = 2; r < emb.vectors.size(); ++r)
    for (auto& v : emb.vectors[r]) v = rng.uniform(-0.5, 0.5);
  return emb;
}

bool criterion_5(std::string& detail) {
  auto t0 = Clock::now();
  auto emb = toy_embeddings(9, 8, 2);
  std::vector<features::FeatureVector> xs;
  std::vector<int> ys;
  Rng rng(31);
  for (int i = 0; i < 150; ++i) {
    int cls = i % 3;
    std::vector<double> tab(features::kTabularDim, 0.0);
    for (auto& v : tab) v = 0.05 * rng.uniform(-1.0, 1.0);
    // the tabular block only separates class 0; classes 1 and 2 look alike
    if (cls == 0) tab[0] += 1.0;
    std::vector<std::uint32_t> seq(features::kSequenceLen, 0);
    for (int j = 0; j < 6; ++j)
      seq[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(2 + 3 * cls + (j % 3));
    xs.push_back(fv(tab, seq));
    ys.push_back(cls);
  }

  net::TrainConfig cfg;
  cfg.seed = 7;
  cfg.lr = 0.01;
  auto result = net::train(net::init_params(emb, 7), xs, ys, cfg);
  double best_acc = 0.0;
  for (const auto& e : result.history) best_acc = std::max(best_acc, e.val_accuracy);

  auto split = net::stratified_split(ys, 7);
  std::vector<int> truth, lstm_pred, logreg_pred;
  auto logreg = net::train_logreg(xs, ys, {});
  for (auto i : split.validation) {
    truth.push_back(ys[i]);
    auto p = net::forward(result.params, xs[i]);
    lstm_pred.push_back(static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()));
    auto q = net::logreg_predict(logreg, xs[i].tabular);
    logreg_pred.push_back(static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin()));
  }
  auto lstm_metrics = metrics::compute_metrics(lstm_pred, truth, 3);
  auto logreg_metrics = metrics::compute_metrics(logreg_pred, truth, 3);

  double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "val accuracy %.3f, macro F1 %.3f (network) vs %.3f (baseline), %.1fs", best_acc,
                lstm_metrics.macro_f1, logreg_metrics.macro_f1, secs);
  detail = buf;
  return best_acc >= 0.90 && lstm_metrics.macro_f1 >= logreg_metrics.macro_f1 && secs < 600.0;
}

// ---------------------------------------------------------------------------
// Criterion 6: Shapley axioms. Efficiency on a nonlinear model over 50 random
// instances; symmetry and the null player exactly on constructed models.

bool criterion_6(std::string& detail) {
  const std::size_t dim = features::kTabularDim;
  Rng wr(7);
  std::vector<double> w(dim), v(dim);
  for (auto& x : w) x = wr.uniform(-1.0, 1.0);
  for (auto& x : v) x = wr.uniform(-1.0, 1.0);
  explain::TabularPredictor f = [&](const std::vector<double>& tab) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      a += w[i] * tab[i];
      b += v[i] * tab[i];
    }
    return std::tanh(a) + 0.5 / (1.0 + std::exp(-b));
  };

  Rng ir(99);
  std::vector<std::vector<double>> instances(50, std::vector<double>(dim));
  std::vector<double> background(dim, 0.0);
  for (auto& inst : instances)
    for (std::size_t i = 0; i < dim; ++i) {
      inst[i] = ir.uniform();
      background[i] += inst[i] / 50.0;
    }

  double worst_eff = 0.0;
  for (const auto& inst : instances) {
    auto ex = explain::shapley_tabular(f, inst, background);
    double sum = 0.0;
    for (const auto& a : ex.attributions) sum += a.weight;
    worst_eff = std::max(worst_eff, std::fabs(sum - (f(inst) - ex.baseline_value)));
  }

  // symmetry: a model symmetric in two user fields, evaluated where the two
  // fields carry the same value, must credit them identically
  explain::TabularPredictor sym = [](const std::vector<double>& tab) {
    double s = tab[37] + tab[38];
    return s * s + 0.25 * tab[0];
  };
  std::vector<double> x_sym(dim, 0.1), bg_sym(dim, 0.0);
  x_sym[37] = x_sym[38] = 0.4;
  auto ex_sym = explain::shapley_tabular(sym, x_sym, bg_sym);
  double phi37 = 0.0, phi38 = 0.0;
  for (const auto& a : ex_sym.attributions) {
    if (a.name == "user_age_norm") phi37 = a.weight;
    if (a.name == "user_gender_female") phi38 = a.weight;
  }
  bool symmetry_exact = phi37 == phi38 && phi37 != 0.0;

  // null player: a model that never reads the topic block must give it zero
  explain::TabularPredictor null_topic = [](const std::vector<double>& tab) {
    double s = 0.0;
    for (std::size_t i = 0; i < 12; ++i) s += tab[i];
    return std::sin(s) + tab[40];
  };
  std::vector<double> x_null(dim, 0.3), bg_null(dim, 0.05);
  auto ex_null = explain::shapley_tabular(null_topic, x_null, bg_null);
  double phi_topic = 1.0;
  for (const auto& a : ex_null.attributions)
    if (a.name == "topic") phi_topic = a.weight;
  bool null_exact = phi_topic == 0.0;

  char buf[128];
  std::snprintf(buf, sizeof buf, "worst efficiency gap %.2e, symmetry %s, null player %s",
                worst_eff, symmetry_exact ? "exact" : "BROKEN",
                null_exact ? "exact" : "BROKEN");
  detail = buf;
  return worst_eff < 1e-6 && symmetry_exact && null_exact;
}

// ---------------------------------------------------------------------------
// Criterion 7: local surrogate sanity on a trigger model and a constant model.

bool criterion_7(std::string& detail) {
  textprep::TokenizedText text;
  text.tokens = {"you", "are", "total", "slur", "kid"};
  std::vector<double> tab(features::kTabularDim, 0.0);

  explain::MixedPredictor trigger = [](const std::vector<std::string>& tokens,
                                       const std::vector<double>&) {
    for (const auto& t : tokens)
      if (t == "slur") return 0.9;
    return 0.1;
  };
  std::size_t top_hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto ex = explain::lime_explain(trigger, text, tab, 200, seed);
    if (!ex.attributions.empty() && ex.attributions.front().name == "slur") ++top_hits;
  }

  explain::MixedPredictor constant = [](const std::vector<std::string>&,
                                        const std::vector<double>&) { return 0.42; };
  auto ex_const = explain::lime_explain(constant, text, tab, 200, 5);
  double worst_const = 0.0;
  for (const auto& a : ex_const.attributions)
    worst_const = std::max(worst_const, std::fabs(a.weight));

  char buf[96];
  std::snprintf(buf, sizeof buf, "trigger on top in %zu/100 runs, constant max |w| %.2e",
                top_hits, worst_const);
  detail = buf;
  return top_hits >= 90 && worst_const < 1e-9;
}

// ---------------------------------------------------------------------------
// Criterion 8: topic-vector simplex property, the document-frequency floor,
// and embedding similarity ordering across seeds.

textprep::TokenizedText doc(std::vector<std::string> tokens) {
  textprep::TokenizedText t;
  t.tokens = std::move(tokens);
  return t;
}

bool criterion_8(std::string& detail) {
  // 40 documents over three word groups; "rare" appears in exactly 9 of
  // them, one short of the df floor, "common" in 12
  std::vector<textprep::TokenizedText> docs;
  const std::vector<std::string> groups[3] = {{"school", "class", "teacher"},
                                              {"game", "win", "team"},
                                              {"music", "song", "band"}};
  for (int i = 0; i < 40; ++i) {
    std::vector<std::string> t;
    const auto& g = groups[i % 3];
    for (int j = 0; j < 5; ++j) t.push_back(g[(i + j) % 3]);
    if (i < 12) t.push_back("common");
    if (i < 9) t.push_back("rare");
    docs.push_back(doc(t));
  }
  docs.push_back(doc({}));             // empty document
  docs.push_back(doc({"zzz", "qqq"})); // out-of-vocabulary document

  topics::LdaConfig cfg;  // 25 topics, df floor 10
  cfg.train_sweeps = 80;
  auto model = topics::fit_lda(docs, cfg, 11);
  bool floor_ok =
      model.vocabulary.count("common") == 1 && model.vocabulary.count("rare") == 0;

  double worst_sum_gap = 0.0;
  bool dims_ok = true;
  for (const auto& d : docs) {
    auto theta = topics::infer_topics(model, d);
    dims_ok = dims_ok && theta.size() == 25;
    double sum = 0.0;
    for (double x : theta) sum += x;
    worst_sum_gap = std::max(worst_sum_gap, std::fabs(sum - 1.0));
  }

  // embeddings: words that always co-occur must score closer than words from
  // a disjoint context, across seeds
  std::vector<textprep::TokenizedText> edocs;
  const std::vector<std::string> grief = {"sob", "pain", "cry", "hurt"};
  const std::vector<std::string> nature = {"green", "tree", "leaf", "grass"};
  for (int i = 0; i < 60; ++i) {
    std::vector<std::string> g, n;
    for (int j = 0; j < 6; ++j) {
      g.push_back(grief[(i + j) % 4]);
      n.push_back(nature[(i + 2 * j) % 4]);
    }
    edocs.push_back(doc(g));
    edocs.push_back(doc(n));
  }
  embeddings::CbowConfig ecfg;
  ecfg.window = 5;
  ecfg.epochs = 20;
  std::size_t ordered = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto m = embeddings::train_cbow(edocs, ecfg, seed);
    if (embeddings::similarity(m, "sob", "pain").cosine >
        embeddings::similarity(m, "sob", "green").cosine)
      ++ordered;
  }

  char buf[128];
  std::snprintf(buf, sizeof buf,
                "worst topic-sum gap %.2e, df floor %s, similarity ordered %zu/10 seeds",
                worst_sum_gap, floor_ok ? "enforced" : "BROKEN", ordered);
  detail = buf;
  return dims_ok && worst_sum_gap <= 1e-9 && floor_ok && ordered >= 9;
}

// ---------------------------------------------------------------------------
// Criterion 9: two CLI runs of the whole pipeline under one seed leave
// byte-identical workspaces.

bool criterion_9(std::string& detail) {
#ifndef BULLYRANK_CLI_PATH
  detail = "CLI path not configured";
  return false;
#else
  TempDir root("c9");
  std::string cfg_path = root.path + "/run.cfg";
  std::ofstream cfg(cfg_path);
  cfg << "generate_users = 8\ngenerate_min_messages = 20\ngenerate_max_messages = 30\n"
         "lsi_rank = 16\nlsi_max_docs = 150\nlda_train_sweeps = 60\nlda_infer_sweeps = 15\n"
         "lda_min_posts = 5\nembed_dim = 16\nembed_epochs = 2\ntrain_batch = 16\n"
         "train_max_epochs = 2\nlogreg_iters = 60\nlime_samples = 60\nshap_instances = 10\n";
  cfg.close();

  const char* stages[] = {"generate",       "label",   "train-embeddings",
                          "train-topics",   "features", "train --model lstm",
                          "train --model logreg", "evaluate --model lstm",
                          "evaluate --model logreg", "explain", "report"};
  for (const char* ws : {"a", "b"}) {
    std::string dir = root.path + "/" + ws;
    for (const char* stage : stages) {
      std::string cmd = std::string(BULLYRANK_CLI_PATH) + " --workspace " + dir + " --seed 7" +
                        " --config " + cfg_path + " " + stage + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        detail = std::string("stage failed: ") + stage;
        return false;
      }
    }
  }

  const char* artifacts[] = {
      "corpus.jsonl",   "labels.jsonl",      "label_stats.json",    "embeddings.bin",
      "topics.bin",     "features.bin",      "model.bin",           "logreg.bin",
      "history.csv",    "metrics_lstm.json", "metrics_logreg.json", "explanations.jsonl",
      "shap_summary.csv", "report.json"};
  std::size_t identical = 0;
  for (const char* name : artifacts)
    if (read_file(root.path + "/a/" + name) == read_file(root.path + "/b/" + name)) ++identical;
  detail = std::to_string(identical) + "/14 artifacts byte-identical";
  return identical == 14;
#endif
}

// ---------------------------------------------------------------------------
// Criterion 10: the truncated SVD against a one-sided Jacobi reference on
// random 8-term x 6-document matrices.

using Matrix = std::vector<std::vector<double>>;

Matrix tfidf_matrix(const std::vector<textprep::TokenizedText>& docs,
                    std::vector<std::string>& terms_out) {
  std::map<std::string, int> df;
  for (const auto& d : docs) {
    std::map<std::string, int> seen;
    for (const auto& t : d.tokens) seen[t] = 1;
    for (const auto& [t, _] : seen) df[t] += 1;
  }
  terms_out.clear();
  std::map<std::string, std::size_t> index;
  for (const auto& [t, _] : df) {
    index[t] = terms_out.size();
    terms_out.push_back(t);
  }
  Matrix a(terms_out.size(), std::vector<double>(docs.size(), 0.0));
  for (std::size_t j = 0; j < docs.size(); ++j)
    for (const auto& t : docs[j].tokens) {
      double idf = std::log((1.0 + double(docs.size())) / (1.0 + double(df[t]))) + 1.0;
      a[index[t]][j] += idf;
    }
  return a;
}

struct OracleSvd {
  std::vector<double> sigma;
  Matrix u;
};

OracleSvd oracle_svd(Matrix a) {
  const std::size_t m = a.size(), n = a[0].size();
  for (int sweep = 0; sweep < 300; ++sweep) {
    bool changed = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += a[i][p] * a[i][p];
          beta += a[i][q] * a[i][q];
          gamma += a[i][p] * a[i][q];
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-14 * std::sqrt(alpha * beta)) continue;
        changed = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
      }
    }
    if (!changed) break;
  }
  std::vector<std::pair<double, std::size_t>> norms;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += a[i][j] * a[i][j];
    norms.push_back({std::sqrt(s), j});
  }
  std::stable_sort(norms.begin(), norms.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  OracleSvd out;
  double top = norms.empty() ? 0.0 : norms[0].first;
  for (const auto& [sig, j] : norms) {
    if (sig <= top * 1e-10) break;
    std::vector<double> col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = a[i][j] / sig;
    double best = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (std::abs(col[i]) > best) {
        best = std::abs(col[i]);
        at = i;
      }
    if (col[at] < 0)
      for (double& x : col) x = -x;
    out.sigma.push_back(sig);
    if (out.u.empty()) out.u.assign(m, {});
    for (std::size_t i = 0; i < m; ++i) out.u[i].push_back(col[i]);
  }
  return out;
}

bool criterion_10(std::string& detail) {
  Rng rng(2026);
  const std::vector<std::string> pool = {"t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7"};
  std::size_t pass = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<textprep::TokenizedText> docs(6);
    for (auto& d : docs)
      for (const auto& t : pool) {
        int c = rng.uniform_int(0, 3);
        for (int i = 0; i < c; ++i) d.tokens.push_back(t);
      }
    // keep the matrix exactly 8 x 6: every term in some document, none empty
    for (std::size_t i = 0; i < pool.size(); ++i) docs[i % 6].tokens.push_back(pool[i]);

    auto model = semantics::build_lsi(docs, 8);
    std::vector<std::string> terms;
    Matrix a = tfidf_matrix(docs, terms);
    auto oracle = oracle_svd(a);

    bool ok = terms == model.terms && model.k <= oracle.sigma.size();
    double scale = std::max(1.0, oracle.sigma.empty() ? 1.0 : oracle.sigma[0]);
    for (std::size_t j = 0; ok && j < model.k; ++j) {
      double gap = std::fabs(model.singular_values[j] - oracle.sigma[j]);
      worst = std::max(worst, gap / scale);
      ok = gap < 1e-8 * scale;
    }
    for (std::size_t i = 0; ok && i < terms.size(); ++i)
      for (std::size_t j = 0; ok && j < model.k; ++j) {
        double gap = std::fabs(model.term_vectors[i][j] - oracle.u[i][j] * oracle.sigma[j]);
        worst = std::max(worst, gap / scale);
        ok = gap < 1e-8 * scale;
      }
    if (ok) ++pass;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu/100 trials, worst scaled gap %.2e", pass, worst);
  detail = buf;
  return pass == 100;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*run)(std::string&);
  };
  const Criterion criteria[] = {
      {"labeling matches the brute-force oracle on a 400-user corpus", criterion_1},
      {"intensity fixtures classify to the pinned severities", criterion_2},
      {"vulnerability factor correct on all 128 combinations", criterion_3},
      {"analytic gradients match finite differences on every tensor", criterion_4},
      {"network beats the baseline on the separable benchmark", criterion_5},
      {"grouped Shapley efficiency, symmetry and null player hold", criterion_6},
      {"local surrogate finds the trigger token and zeros constants", criterion_7},
      {"topic simplex, df floor and embedding ordering hold", criterion_8},
      {"full pipeline is byte-identical across two seeded runs", criterion_9},
      {"truncated SVD matches the dense reference on 100 matrices", criterion_10},
  };

  int failures = 0;
  int k = 0;
  for (const auto& c : criteria) {
    ++k;
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", k, c.name,
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
