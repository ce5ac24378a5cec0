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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "divine/removal.h"
#include "doctest.h"

using namespace divine;

namespace {

RemovalConfig toy_config() {
  RemovalConfig cfg;
  cfg.measure = Measure::kLOO;
  cfg.eval = EvalKind::kEqualAccuracy;
  cfg.score_split = SplitRole::kTrain;
  cfg.report_split = SplitRole::kTrain;
  cfg.batch_fraction = 1.0 / 6;  // batch of one
  cfg.max_fraction = 1.0 / 3;
  cfg.reg = 1e-3;
  return cfg;
}

}  // namespace

TEST_CASE("toy removal row zero records the original model") {
  Dataset toy = toy_fixture();
  RemovalTrace t = run_removal(toy, toy, toy, toy_config());
  REQUIRE(t.rows.size() >= 2);
  CHECK(t.rows[0].cumulative_fraction_removed == 0.0);
  CHECK(t.rows[0].removed_ids.empty());
  CHECK(*t.rows[0].accuracy == doctest::Approx(5.0 / 6));
  CHECK(*t.rows[0].unfairness == doctest::Approx(1.0));
  // LOO under f_unf ties the bottom-left corner and the poisoned point at
  // -0.5 (dropping either repairs one rate gap); the stable order takes
  // the lower index.
  CHECK(t.rows[1].removed_ids == std::vector<int>{2});
  CHECK(t.rows[1].unfairness.has_value());
}

TEST_CASE("toy removal via IF takes the poisoned point and repairs") {
  // IF displacement scores single out the poisoned point (only nonzero
  // score, -0.5), avoiding the LOO tie.
  Dataset toy = toy_fixture();
  RemovalConfig cfg = toy_config();
  cfg.measure = Measure::kIF;
  RemovalTrace t = run_removal(toy, toy, toy, cfg);
  REQUIRE(t.rows.size() >= 2);
  CHECK(t.rows[1].removed_ids == std::vector<int>{5});
  CHECK(*t.rows[1].unfairness == 0.0);
  CHECK(*t.rows[1].accuracy == 1.0);
  // After the poison is gone, no negated score stays positive.
  CHECK_FALSE(t.rows[1].all_harmful_exhausted);
  if (t.rows.size() > 2) CHECK(t.rows[2].all_harmful_exhausted);
}

TEST_CASE("recalculation at batch one stops flagging harmful points") {
  Dataset toy = toy_fixture();
  RemovalConfig cfg = toy_config();
  cfg.measure = Measure::kIF;
  cfg.recalc_every_batch = true;
  cfg.max_fraction = 0.5;
  RemovalTrace t = run_removal(toy, toy, toy, cfg);
  REQUIRE(t.rows.size() >= 3);
  CHECK(t.rows[1].removed_ids == std::vector<int>{5});
  // Rescoring after the repair finds no remaining harmful points.
  CHECK(t.rows[2].all_harmful_exhausted);
}

TEST_CASE("trace bookkeeping on synthetic data") {
  Dataset train = generate_synthetic(80, 8, 1);
  Dataset val = generate_synthetic(40, 4, 2);
  RemovalConfig cfg;
  cfg.measure = Measure::kIF;
  cfg.eval = EvalKind::kLoss;
  cfg.score_split = SplitRole::kVal;
  cfg.report_split = SplitRole::kVal;
  cfg.batch_fraction = 0.10;
  cfg.max_fraction = 0.30;
  RemovalTrace t = run_removal(train, val, val, cfg);
  REQUIRE(t.rows.size() == 4);  // original + three 10% batches
  std::set<int> all;
  double prev = -1;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(t.rows[r].cumulative_fraction_removed > prev);
    prev = t.rows[r].cumulative_fraction_removed;
    for (int id : t.rows[r].removed_ids) CHECK(all.insert(id).second);
  }
  CHECK(static_cast<int>(all.size()) == 27);  // 3 * ceil(8.8)
  CHECK(prev == doctest::Approx(27.0 / 88));
  // Metrics recorded throughout.
  for (const auto& row : t.rows) {
    CHECK(row.accuracy.has_value());
    CHECK(row.eval_value.has_value());
  }
}

TEST_CASE("random selection differs from importance selection") {
  Dataset train = generate_synthetic(60, 6, 3);
  Dataset val = generate_synthetic(30, 3, 4);
  RemovalConfig cfg;
  cfg.measure = Measure::kIF;
  cfg.eval = EvalKind::kLoss;
  cfg.batch_fraction = 0.2;
  cfg.max_fraction = 0.2;
  cfg.selection = RemovalSelection::kImportanceOnly;
  RemovalTrace imp = run_removal(train, val, val, cfg);
  cfg.selection = RemovalSelection::kRandom;
  cfg.seed = 5;
  RemovalTrace rnd = run_removal(train, val, val, cfg);
  CHECK(imp.rows[1].removed_ids != rnd.rows[1].removed_ids);
  // Random is deterministic per seed.
  RemovalTrace rnd2 = run_removal(train, val, val, cfg);
  CHECK(rnd.rows[1].removed_ids == rnd2.rows[1].removed_ids);
}

TEST_CASE("divine selection accepts a gamma-weighted diversity term") {
  Dataset train = generate_synthetic(40, 4, 6);
  Dataset val = generate_synthetic(20, 2, 7);
  RemovalConfig cfg;
  cfg.measure = Measure::kIF;
  cfg.eval = EvalKind::kLoss;
  cfg.batch_fraction = 0.25;
  cfg.max_fraction = 0.25;
  cfg.selection = RemovalSelection::kDivine;
  cfg.gamma = 10.0;
  cfg.divkind = DiversityKind::kFL;
  RemovalTrace t = run_removal(train, val, val, cfg);
  CHECK(t.rows.size() == 2);
  CHECK(t.rows[1].removed_ids.size() == 11);
}

TEST_CASE("config validation") {
  Dataset toy = toy_fixture();
  RemovalConfig cfg = toy_config();
  cfg.batch_fraction = 0.5;
  cfg.max_fraction = 0.25;
  CHECK_THROWS((void)run_removal(toy, toy, toy, cfg));
  cfg.batch_fraction = 0.0;
  CHECK_THROWS((void)run_removal(toy, toy, toy, cfg));
}

TEST_CASE("count of unfairness-inducing points on the toy fixture") {
  Dataset toy = toy_fixture();
  ModelParams model = fit(toy, 1e-3);
  BoundEval f{EvalFn(EvalKind::kEqualAccuracy), &toy};
  ImportanceScores sc = if_scores(toy, f, 1e-3);
  UnfairnessInducingCount c = count_unfairness_inducing(sc, model, toy);
  // Only the poisoned point has negative importance; the six-point model
  // classifies it correctly (it misclassifies (1,1) instead).
  CHECK(c.count == 1);
  CHECK(c.count_correctly_classified == 1);

  ImportanceScores none = sc;
  none.values.setConstant(1.0);
  UnfairnessInducingCount zero = count_unfairness_inducing(none, model, toy);
  CHECK(zero.count == 0);
  CHECK(zero.count_correctly_classified == 0);

  // Negated scores count the complement.
  ImportanceScores neg = sc;
  neg.values = -sc.values;
  UnfairnessInducingCount inv = count_unfairness_inducing(neg, model, toy);
  int pos = 0;
  for (int i = 0; i < 6; ++i) pos += sc.values(i) > 0;
  // Complement up to exact zeros, which count in neither direction.
  CHECK(inv.count == pos);
}

TEST_CASE("name parsing round trips") {
  for (const char* m : {"loo", "if", "ds_exact", "ds_mc", "cfp"})
    CHECK(measure_name(measure_from_name(m)) == m);
  CHECK_THROWS((void)measure_from_name("gradient"));
  CHECK(split_from_name("train") == SplitRole::kTrain);
  CHECK(removal_selection_from_name("divine") == RemovalSelection::kDivine);
  CHECK_THROWS((void)removal_selection_from_name("best"));
}
