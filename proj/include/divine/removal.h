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

#ifndef DIVINE_REMOVAL_H_
#define DIVINE_REMOVAL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "divine/selection.h"

namespace divine {

enum class Measure { kLOO, kIF, kDSExact, kDSMC, kCFP };
Measure measure_from_name(const std::string& name);
std::string measure_name(Measure m);

// Dispatches to the valuation module by measure name.
ImportanceScores compute_scores(Measure measure, const Dataset& train,
                                const BoundEval& f, const MCConfig& mc,
                                double reg = kDefaultReg,
                                double tol = kDefaultTol);

enum class SplitRole { kTrain, kVal, kTest };
SplitRole split_from_name(const std::string& name);

enum class RemovalSelection { kDivine, kImportanceOnly, kDiversityOnly,
                              kRandom };
RemovalSelection removal_selection_from_name(const std::string& name);

struct RemovalConfig {
  Measure measure = Measure::kIF;
  EvalKind eval = EvalKind::kEqualAccuracy;
  SplitRole score_split = SplitRole::kVal;
  SplitRole report_split = SplitRole::kTrain;
  double batch_fraction = 0.05;
  double max_fraction = 0.60;
  bool recalc_every_batch = false;
  RemovalSelection selection = RemovalSelection::kImportanceOnly;
  double gamma = 0;                       // divine selection
  DiversityKind divkind = DiversityKind::kFL;
  double bandwidth = 0;                   // <= 0: median heuristic
  std::uint64_t seed = 0;                 // random selection
  MCConfig mc;                            // DS_mc only
  double reg = kDefaultReg;
  double tol = kDefaultTol;
};

struct RemovalRow {
  double cumulative_fraction_removed = 0;
  std::vector<int> removed_ids;           // original point ids, this batch
  std::optional<double> accuracy;
  std::optional<double> unfairness;       // equal accuracy on report split
  std::optional<double> eval_value;       // cfg.eval on report split
  bool all_harmful_exhausted = false;
};

struct RemovalTrace {
  std::vector<RemovalRow> rows;  // row 0 is the original model
};

// Scores on score_split, negates, removes batches of
// ceil(batch_fraction * n) points up to max_fraction, refitting and
// reporting metrics on report_split each round. Metrics that hit an empty
// confusion cell are recorded as absent and the run continues.
RemovalTrace run_removal(const Dataset& train, const Dataset& val,
                         const Dataset& test, const RemovalConfig& cfg);

struct UnfairnessInducingCount {
  int count = 0;                     // points with negative importance
  int count_correctly_classified = 0;  // of those, correct under the model
};

UnfairnessInducingCount count_unfairness_inducing(
    const ImportanceScores& scores, const ModelParams& model,
    const Dataset& train);

}  // namespace divine

#endif  // DIVINE_REMOVAL_H_
