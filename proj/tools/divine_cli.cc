// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// divine: value / select / tradeoff / remove / synth / toy.
//
// All configuration lives in one JSON file (--config); individual flags
// override single fields. Randomness flows from one global seed (env
// DIVINE_SEED takes precedence). Every command writes its output file
// plus a manifest {config hash, seed, versions} into --output-dir.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "divine/removal.h"
#include "divine/rng.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace divine;

namespace {

constexpr const char* kVersion = "0.1.0";

json default_config() {
  return json{
      {"dataset",
       {{"source", "synthetic"},
        {"n_main", 200},
        {"n_outlier", 20},
        {"csv_path", ""},
        {"schema",
         {{"feature_columns", json::array()},
          {"label_column", ""},
          {"sensitive_column", ""},
          {"label_map", json::object()},
          {"group_map", json::object()}}},
        {"standardize", true}}},
      {"split", {{"train", 0.7}, {"val", 0.2}, {"test", 0.1}}},
      {"model", {{"reg", kDefaultReg}, {"tol", kDefaultTol}}},
      {"measure", "if"},
      {"mc",
       {{"max_permutations", 5000},
        {"truncation_tol", -1.0},
        {"convergence_window", 100}}},
      {"eval", "loss"},
      {"score_split", "val"},
      {"diversity", {{"kind", "fl"}, {"bandwidth", 0.0}}},
      {"selection", {{"gamma", 0.0}, {"m", 10}, {"stochastic", false}}},
      {"removal",
       {{"batch", 0.05},
        {"max", 0.6},
        {"selection", "importance"},
        {"recalc", false},
        {"score_split", "val"},
        {"report_split", "train"}}},
      {"output_dir", "out"},
      {"seed", 0}};
}

// Recursive overlay of user config onto defaults; unknown keys rejected.
void merge_config(json& base, const json& user, const std::string& path) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (!base.contains(it.key()))
      throw std::runtime_error("config: unknown key " + path + it.key());
    if (base[it.key()].is_object() && it->is_object())
      merge_config(base[it.key()], *it, path + it.key() + ".");
    else
      base[it.key()] = *it;
  }
}

struct Splits {
  Dataset train, val, test;
};

Splits load_data(const json& cfg) {
  const json& d = cfg["dataset"];
  std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  std::string source = d["source"];
  if (source == "toy") {
    // The fixture is its own evaluation set; no split, no standardization.
    Dataset t = toy_fixture();
    return {t, t, t};
  }
  Dataset full;
  if (source == "synthetic") {
    full = generate_synthetic(d["n_main"], d["n_outlier"], seed);
  } else if (source == "csv") {
    CsvSchema schema;
    for (const auto& c : d["schema"]["feature_columns"])
      schema.feature_columns.push_back(c.get<std::string>());
    schema.label_column = d["schema"]["label_column"];
    schema.sensitive_column = d["schema"]["sensitive_column"];
    for (auto it = d["schema"]["label_map"].begin();
         it != d["schema"]["label_map"].end(); ++it)
      schema.label_map[it.key()] = it->get<double>();
    for (auto it = d["schema"]["group_map"].begin();
         it != d["schema"]["group_map"].end(); ++it)
      schema.group_map[it.key()] = it->get<int>();
    full = load_csv(d["csv_path"], schema);
  } else {
    throw std::runtime_error("config: unknown dataset source " + source);
  }
  SplitSpec spec;
  spec.train_frac = cfg["split"]["train"];
  spec.val_frac = cfg["split"]["val"];
  spec.test_frac = cfg["split"]["test"];
  spec.seed = seed;
  auto [train, val, test] = split(full, spec);
  if (d["standardize"].get<bool>()) {
    Scaler s = fit_scaler(train);
    train = apply_scaler(train, s);
    val = apply_scaler(val, s);
    test = apply_scaler(test, s);
  }
  return {train, val, test};
}

const Dataset& pick(const Splits& s, const std::string& name) {
  switch (split_from_name(name)) {
    case SplitRole::kTrain: return s.train;
    case SplitRole::kVal: return s.val;
    case SplitRole::kTest: return s.test;
  }
  throw std::runtime_error("unreachable");
}

std::string config_hash(const json& cfg) {
  // Where the results land is not part of the experiment identity.
  json semantic = cfg;
  semantic.erase("output_dir");
  std::uint64_t h = Fnv1a(semantic.dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const json& cfg) {
  json m{{"command", command},
         {"config_hash", config_hash(cfg)},
         {"seed", cfg["seed"]},
         {"versions", {{"divine", kVersion}, {"config_format", 1}}}};
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << "\n";
}

MCConfig mc_config(const json& cfg) {
  MCConfig mc;
  mc.max_permutations = cfg["mc"]["max_permutations"];
  mc.truncation_tol = cfg["mc"]["truncation_tol"];
  mc.convergence_window = cfg["mc"]["convergence_window"];
  mc.seed = cfg["seed"].get<std::uint64_t>();
  return mc;
}

EvalFn eval_fn(const json& cfg) {
  return EvalFn(eval_kind_from_name(cfg["eval"].get<std::string>()));
}

ImportanceScores score_train(const json& cfg, const Splits& s) {
  EvalFn f = eval_fn(cfg);
  const Dataset& eval_ds = pick(s, cfg["score_split"]);
  BoundEval be{f, &eval_ds};
  return compute_scores(measure_from_name(cfg["measure"]), s.train, be,
                        mc_config(cfg), cfg["model"]["reg"],
                        cfg["model"]["tol"]);
}

json scores_to_json(const ImportanceScores& sc, const Dataset& train) {
  json out{{"measure", sc.measure},
           {"eval", sc.eval},
           {"variant", sc.variant},
           {"additive", sc.additive},
           {"converged", sc.converged},
           {"ids", train.ids},
           {"values", std::vector<double>(
                          sc.values.data(), sc.values.data() + sc.values.size())}};
  if (!sc.unflippable.empty()) out["unflippable"] = sc.unflippable;
  return out;
}

int cmd_value(const json& cfg, const fs::path& dir) {
  Splits s = load_data(cfg);
  ImportanceScores sc = score_train(cfg, s);
  std::ofstream out(dir / "scores.json");
  out << scores_to_json(sc, s.train).dump(2) << "\n";
  write_manifest(dir, "value", cfg);
  return 0;
}

int cmd_select(const json& cfg, const fs::path& dir) {
  Splits s = load_data(cfg);
  ImportanceScores sc = score_train(cfg, s);
  KernelMatrix kernel =
      rbf_kernel(s.train, cfg["diversity"]["bandwidth"].get<double>());
  DiversityFn divfn(
      diversity_kind_from_name(cfg["diversity"]["kind"].get<std::string>()),
      &kernel);
  double gamma = cfg["selection"]["gamma"];
  int m = cfg["selection"]["m"];
  SelectionResult r;
  if (cfg["selection"]["stochastic"].get<bool>()) {
    int ss = stochastic_greedy_sample_size(s.train.n(), m);
    r = stochastic_greedy_select(sc, divfn, gamma, m, ss,
                                 cfg["seed"].get<std::uint64_t>());
  } else {
    r = greedy_select(sc, divfn, gamma, m);
  }
  std::vector<int> chosen_ids;
  for (int i : r.chosen) chosen_ids.push_back(s.train.ids[i]);
  json out{{"gamma", r.gamma},
           {"m", m},
           {"chosen", r.chosen},
           {"chosen_ids", chosen_ids},
           {"importance_sum", r.importance_sum},
           {"diversity_value", r.diversity_value},
           {"objective", r.objective},
           {"bandwidth", kernel.bandwidth}};
  std::ofstream f(dir / "selection.json");
  f << out.dump(2) << "\n";
  write_manifest(dir, "select", cfg);
  return 0;
}

std::string join_ids(const std::vector<int>& ids) {
  std::ostringstream os;
  for (size_t i = 0; i < ids.size(); ++i)
    os << (i ? ";" : "") << ids[i];
  return os.str();
}

int cmd_tradeoff(const json& cfg, const fs::path& dir) {
  Splits s = load_data(cfg);
  ImportanceScores sc = score_train(cfg, s);
  KernelMatrix kernel =
      rbf_kernel(s.train, cfg["diversity"]["bandwidth"].get<double>());
  DiversityFn divfn(
      diversity_kind_from_name(cfg["diversity"]["kind"].get<std::string>()),
      &kernel);
  int m = cfg["selection"]["m"];
  TradeoffCurve curve = tradeoff_curve(sc, divfn, m, default_gamma_grid());
  std::ofstream out(dir / "tradeoff.csv");
  out << "gamma,influence_retained_fraction,diversity_value,chosen\n";
  out.precision(17);
  for (const auto& row : curve.rows) {
    std::vector<int> ids;
    for (int i : row.chosen) ids.push_back(s.train.ids[i]);
    out << row.gamma << "," << row.influence_retained_fraction << ","
        << row.diversity_value << "," << join_ids(ids) << "\n";
  }
  write_manifest(dir, "tradeoff", cfg);
  return 0;
}

int cmd_remove(const json& cfg, const fs::path& dir) {
  Splits s = load_data(cfg);
  const json& r = cfg["removal"];
  RemovalConfig rc;
  rc.measure = measure_from_name(cfg["measure"]);
  rc.eval = eval_kind_from_name(cfg["eval"].get<std::string>());
  rc.score_split = split_from_name(r["score_split"]);
  rc.report_split = split_from_name(r["report_split"]);
  rc.batch_fraction = r["batch"];
  rc.max_fraction = r["max"];
  rc.recalc_every_batch = r["recalc"];
  rc.selection = removal_selection_from_name(r["selection"]);
  rc.gamma = cfg["selection"]["gamma"];
  rc.divkind =
      diversity_kind_from_name(cfg["diversity"]["kind"].get<std::string>());
  rc.bandwidth = cfg["diversity"]["bandwidth"];
  rc.seed = cfg["seed"].get<std::uint64_t>();
  rc.mc = mc_config(cfg);
  rc.reg = cfg["model"]["reg"];
  rc.tol = cfg["model"]["tol"];
  RemovalTrace trace = run_removal(s.train, s.val, s.test, rc);
  std::ofstream out(dir / "trace.csv");
  out << "cumulative_fraction_removed,removed_ids,accuracy,unfairness,"
         "eval_value,all_harmful_exhausted\n";
  out.precision(17);
  auto opt = [](const std::optional<double>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const auto& row : trace.rows) {
    out << row.cumulative_fraction_removed << ","
        << join_ids(row.removed_ids) << "," << opt(row.accuracy) << ","
        << opt(row.unfairness) << "," << opt(row.eval_value) << ","
        << (row.all_harmful_exhausted ? 1 : 0) << "\n";
  }
  write_manifest(dir, "remove", cfg);
  return 0;
}

int cmd_synth(const json& cfg, const fs::path& dir) {
  const json& d = cfg["dataset"];
  Dataset ds = generate_synthetic(d["n_main"], d["n_outlier"],
                                  cfg["seed"].get<std::uint64_t>());
  std::ofstream out(dir / "dataset.csv");
  out << "id,x1,x2,y,a\n";
  out.precision(17);
  for (int i = 0; i < ds.n(); ++i)
    out << ds.ids[i] << "," << ds.X(i, 0) << "," << ds.X(i, 1) << ","
        << static_cast<int>(ds.y(i)) << "," << ds.group(i) << "\n";
  write_manifest(dir, "synth", cfg);
  return 0;
}

int cmd_toy(const json& cfg, const fs::path& dir) {
  Dataset toy = toy_fixture();
  double reg = cfg["model"]["reg"], tol = cfg["model"]["tol"];
  Dataset clean = drop_points(toy, {toy.n() - 1});  // without the poison
  ModelParams p5 = fit(clean, reg, tol);
  ModelParams p6 = fit(toy, reg, tol);

  json report;
  report["five_point"] = {{"accuracy", accuracy(p5, clean)},
                          {"unfairness", f_equal_accuracy(p5, clean)}};
  report["six_point"] = {{"accuracy", accuracy(p6, toy)},
                         {"unfairness", f_equal_accuracy(p6, toy)}};
  for (const char* eval : {"loss", "equal_accuracy"}) {
    EvalFn f(eval_kind_from_name(eval));
    BoundEval be{f, &toy};
    json per;
    for (Measure m : {Measure::kLOO, Measure::kIF, Measure::kDSExact,
                      Measure::kCFP}) {
      ImportanceScores sc = compute_scores(m, toy, be, MCConfig{}, reg, tol);
      int arg = 0;
      for (int i = 1; i < toy.n(); ++i)
        if (std::abs(sc.values(i)) > std::abs(sc.values(arg))) arg = i;
      per[measure_name(m)] = {
          {"values", std::vector<double>(
                         sc.values.data(), sc.values.data() + toy.n())},
          {"argmax_abs", arg}};
    }
    report[std::string("scores_") + eval] = per;
  }
  report["outlier_index"] = 4;
  report["poison_index"] = 5;
  std::ofstream out(dir / "toy_report.json");
  out << report.dump(2) << "\n";
  write_manifest(dir, "toy", cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divine: data valuation, diverse selection, removal"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--output-dir", output_dir, "output directory override");
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "global seed override");
  std::optional<std::string> measure_flag, eval_flag, divfn_flag;
  app.add_option("--measure", measure_flag,
                 "loo|if|ds_exact|ds_mc|cfp");
  app.add_option("--eval", eval_flag,
                 "loss|equal_accuracy|equal_opportunity|equalized_odds|"
                 "loss+unfairness");
  app.add_option("--divfn", divfn_flag, "sr|fl|mmd");
  std::optional<double> gamma_flag;
  app.add_option("--gamma", gamma_flag, "diversity weight");
  std::optional<int> m_flag;
  app.add_option("-m,--subset-size", m_flag, "selection size");

  CLI::App* c_value = app.add_subcommand("value", "importance scores");
  CLI::App* c_select = app.add_subcommand("select", "DIVINE subset");
  CLI::App* c_tradeoff =
      app.add_subcommand("tradeoff", "gamma sweep curve");
  CLI::App* c_remove = app.add_subcommand("remove", "removal loop");
  CLI::App* c_synth = app.add_subcommand("synth", "synthetic dataset");
  CLI::App* c_toy = app.add_subcommand("toy", "poisoned-square report");
  // Global flags may follow the subcommand name.
  for (CLI::App* c : {c_value, c_select, c_tradeoff, c_remove, c_synth, c_toy})
    c->fallthrough();

  std::optional<double> batch_flag, max_flag;
  std::optional<std::string> rsel_flag, score_split_flag, report_split_flag;
  bool recalc_flag = false;
  c_remove->add_option("--batch", batch_flag, "batch fraction");
  c_remove->add_option("--max", max_flag, "max removed fraction");
  c_remove->add_option("--selection", rsel_flag,
                       "divine|importance|diversity|random");
  c_remove->add_option("--score-split", score_split_flag, "train|val|test");
  c_remove->add_option("--report-split", report_split_flag,
                       "train|val|test");
  c_remove->add_flag("--recalc", recalc_flag, "rescore every batch");
  std::optional<int> n_flag, n_outlier_flag;
  c_synth->add_option("--n", n_flag, "main sample count");
  c_synth->add_option("--n-outlier", n_outlier_flag, "outlier count");

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg = default_config();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("config: cannot open " + config_path);
      merge_config(cfg, json::parse(in), "");
    }
    if (seed_flag) cfg["seed"] = *seed_flag;
    if (const char* env = std::getenv("DIVINE_SEED"))
      cfg["seed"] = std::stoull(env);
    if (measure_flag) cfg["measure"] = *measure_flag;
    if (eval_flag) cfg["eval"] = *eval_flag;
    if (divfn_flag) cfg["diversity"]["kind"] = *divfn_flag;
    if (gamma_flag) cfg["selection"]["gamma"] = *gamma_flag;
    if (m_flag) cfg["selection"]["m"] = *m_flag;
    if (batch_flag) cfg["removal"]["batch"] = *batch_flag;
    if (max_flag) cfg["removal"]["max"] = *max_flag;
    if (rsel_flag) cfg["removal"]["selection"] = *rsel_flag;
    if (score_split_flag) cfg["removal"]["score_split"] = *score_split_flag;
    if (report_split_flag)
      cfg["removal"]["report_split"] = *report_split_flag;
    if (recalc_flag) cfg["removal"]["recalc"] = true;
    if (n_flag) cfg["dataset"]["n_main"] = *n_flag;
    if (n_outlier_flag) cfg["dataset"]["n_outlier"] = *n_outlier_flag;
    if (!output_dir.empty()) cfg["output_dir"] = output_dir;

    fs::path dir = cfg["output_dir"].get<std::string>();
    fs::create_directories(dir);

    if (c_value->parsed()) return cmd_value(cfg, dir);
    if (c_select->parsed()) return cmd_select(cfg, dir);
    if (c_tradeoff->parsed()) return cmd_tradeoff(cfg, dir);
    if (c_remove->parsed()) return cmd_remove(cfg, dir);
    if (c_synth->parsed()) return cmd_synth(cfg, dir);
    if (c_toy->parsed()) return cmd_toy(cfg, dir);
    throw std::runtime_error("config: no subcommand");
  } catch (const DatasetError& e) {
    std::cerr << "error: dataset: " << e.what() << "\n";
    return 2;
  } catch (const FitError& e) {
    std::cerr << "error: model: " << e.what() << "\n";
    return 3;
  } catch (const EmptyCellError& e) {
    std::cerr << "error: eval: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 1;
  }
}
