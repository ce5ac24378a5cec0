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

#include "divine/removal.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "divine/rng.h"

namespace divine {

Measure measure_from_name(const std::string& name) {
  if (name == "loo") return Measure::kLOO;
  if (name == "if") return Measure::kIF;
  if (name == "ds_exact") return Measure::kDSExact;
  if (name == "ds_mc") return Measure::kDSMC;
  if (name == "cfp") return Measure::kCFP;
  throw std::runtime_error("unknown measure: " + name);
}

std::string measure_name(Measure m) {
  switch (m) {
    case Measure::kLOO: return "loo";
    case Measure::kIF: return "if";
    case Measure::kDSExact: return "ds_exact";
    case Measure::kDSMC: return "ds_mc";
    case Measure::kCFP: return "cfp";
  }
  throw std::runtime_error("unknown measure");
}

ImportanceScores compute_scores(Measure measure, const Dataset& train,
                                const BoundEval& f, const MCConfig& mc,
                                double reg, double tol) {
  switch (measure) {
    case Measure::kLOO: return loo_scores(train, f, reg, tol);
    case Measure::kIF: return if_scores(train, f, reg, tol);
    case Measure::kDSExact: return shapley_exact(train, f, reg, tol);
    case Measure::kDSMC: return shapley_mc(train, f, mc, reg, tol);
    case Measure::kCFP:
      return cfp_scores(train, f, CfpMode::kRetrain, reg, tol);
  }
  throw std::runtime_error("unknown measure");
}

SplitRole split_from_name(const std::string& name) {
  if (name == "train") return SplitRole::kTrain;
  if (name == "val") return SplitRole::kVal;
  if (name == "test") return SplitRole::kTest;
  throw std::runtime_error("unknown split: " + name);
}

RemovalSelection removal_selection_from_name(const std::string& name) {
  if (name == "divine") return RemovalSelection::kDivine;
  if (name == "importance") return RemovalSelection::kImportanceOnly;
  if (name == "diversity") return RemovalSelection::kDiversityOnly;
  if (name == "random") return RemovalSelection::kRandom;
  throw std::runtime_error("unknown removal selection: " + name);
}

namespace {

const Dataset& PickSplit(SplitRole role, const Dataset& train,
                         const Dataset& val, const Dataset& test) {
  switch (role) {
    case SplitRole::kTrain: return train;
    case SplitRole::kVal: return val;
    case SplitRole::kTest: return test;
  }
  throw std::runtime_error("unknown split role");
}

void RecordMetrics(RemovalRow& row, const ModelParams& p,
                   const Dataset& report, const EvalFn& eval) {
  row.accuracy = accuracy(p, report);
  try {
    row.unfairness = f_equal_accuracy(p, report);
  } catch (const EmptyCellError&) {
    row.unfairness.reset();
  }
  try {
    row.eval_value = eval(p, report);
  } catch (const EmptyCellError&) {
    row.eval_value.reset();
  }
}

// Greedy batch pick over negated scores (+ optional diversity term).
// Harmful first, then least-helpful padding — both fall out of the
// descending negated-score order.
std::vector<int> PickBatch(const RemovalConfig& cfg,
                           const Eigen::VectorXd& neg_scores,
                           const Dataset& current, int m,
                           std::uint64_t batch_seed) {
  const int n = current.n();
  m = std::min(m, n);
  if (cfg.selection == RemovalSelection::kRandom) {
    Rng rng(batch_seed, "removal_random");
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < m; ++i)
      std::swap(idx[i], idx[i + rng.UniformInt(n - i)]);
    idx.resize(m);
    std::sort(idx.begin(), idx.end());
    return idx;
  }

  ImportanceScores s;
  s.values = neg_scores;
  double gamma = 0;
  if (cfg.selection == RemovalSelection::kDivine) gamma = cfg.gamma;
  if (cfg.selection == RemovalSelection::kDiversityOnly) {
    s.values.setZero();
    gamma = 1;
  }
  if (gamma > 0) {
    KernelMatrix kernel = rbf_kernel(current, cfg.bandwidth);
    DiversityFn divfn(cfg.divkind, &kernel);
    return greedy_select(s, divfn, gamma, m).chosen;
  }
  // Pure importance ranking needs no kernel.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return neg_scores(a) > neg_scores(b);
  });
  idx.resize(m);
  return idx;
}

}  // namespace

RemovalTrace run_removal(const Dataset& train, const Dataset& val,
                         const Dataset& test, const RemovalConfig& cfg) {
  if (!(cfg.batch_fraction > 0 && cfg.batch_fraction <= cfg.max_fraction &&
        cfg.max_fraction <= 1))
    throw std::runtime_error(
        "run_removal: need 0 < batch_fraction <= max_fraction <= 1");
  const int n0 = train.n();
  const int m = std::max(1, static_cast<int>(
                                std::ceil(cfg.batch_fraction * n0)));
  const EvalFn eval(cfg.eval);
  const Dataset& score_ds = PickSplit(cfg.score_split, train, val, test);
  const Dataset& report_base = PickSplit(cfg.report_split, train, val, test);

  RemovalTrace trace;
  ModelParams model = fit(train, cfg.reg, cfg.tol);
  RemovalRow row0;
  RecordMetrics(row0, model, report_base, eval);
  trace.rows.push_back(std::move(row0));

  Dataset current = train;
  Eigen::VectorXd neg;  // negated scores aligned with current rows
  bool have_scores = false;
  int removed_total = 0;
  int batch_index = 0;
  // A full batch always fits inside the rounded-up budget.
  const int budget = std::max(m, static_cast<int>(
                                     std::ceil(cfg.max_fraction * n0)));
  while (removed_total + m <= budget && current.n() > m) {
    if (!have_scores || cfg.recalc_every_batch) {
      // score_split = train tracks the surviving training set.
      const Dataset& sd =
          cfg.score_split == SplitRole::kTrain ? current : score_ds;
      BoundEval be{eval, &sd};
      ImportanceScores s =
          compute_scores(cfg.measure, current, be, cfg.mc, cfg.reg, cfg.tol);
      neg = -s.values;
      have_scores = true;
    }
    std::vector<int> batch =
        PickBatch(cfg, neg, current, m, cfg.seed + batch_index);
    ++batch_index;

    RemovalRow row;
    row.all_harmful_exhausted = neg.maxCoeff() <= 0;
    for (int i : batch) row.removed_ids.push_back(current.ids[i]);

    // Drop rows and keep the stale score vector aligned.
    std::vector<int> sorted_batch = batch;
    std::sort(sorted_batch.begin(), sorted_batch.end());
    Eigen::VectorXd kept(neg.size() - sorted_batch.size());
    int out = 0;
    size_t next = 0;
    for (int i = 0; i < neg.size(); ++i) {
      if (next < sorted_batch.size() && sorted_batch[next] == i) {
        ++next;
        continue;
      }
      kept(out++) = neg(i);
    }
    neg = kept;
    current = drop_points(current, sorted_batch);
    removed_total += static_cast<int>(batch.size());
    row.cumulative_fraction_removed = static_cast<double>(removed_total) / n0;

    model = fit(current, cfg.reg, cfg.tol);
    const Dataset& report = cfg.report_split == SplitRole::kTrain
                                ? current
                                : report_base;
    RecordMetrics(row, model, report, eval);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

UnfairnessInducingCount count_unfairness_inducing(
    const ImportanceScores& scores, const ModelParams& model,
    const Dataset& train) {
  UnfairnessInducingCount out;
  for (int i = 0; i < train.n(); ++i) {
    if (scores.values(i) >= 0) continue;
    ++out.count;
    if (predict_one(model, train.X.row(i).transpose()) == train.y(i))
      ++out.count_correctly_classified;
  }
  return out;
}

}  // namespace divine
