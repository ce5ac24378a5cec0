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

#ifndef DIVINE_SELECTION_H_
#define DIVINE_SELECTION_H_

#include <cstdint>
#include <map>
#include <vector>

#include "divine/diversity.h"
#include "divine/valuation.h"

namespace divine {

struct SelectionResult {
  std::vector<int> chosen;  // in pick order
  double gamma = 0;
  double importance_sum = 0;
  double diversity_value = 0;
  double objective = 0;  // importance_sum + gamma * diversity_value
  std::vector<double> per_step_gains;
};

struct TradeoffRow {
  double gamma;
  double influence_retained_fraction;
  double diversity_value;
  std::vector<int> chosen;
};

struct TradeoffCurve {
  std::vector<TradeoffRow> rows;
};

// Greedy maximization of I(S) + gamma R(S) at cardinality m; ties broken
// by lowest index. Deterministic.
SelectionResult greedy_select(const ImportanceScores& scores,
                              DiversityFn divfn, double gamma, int m);

// Evaluates only a random sample of s candidates per step.
SelectionResult stochastic_greedy_select(const ImportanceScores& scores,
                                         DiversityFn divfn, double gamma,
                                         int m, int s, std::uint64_t seed);

// Default sample size for epsilon = 0.1: ceil((n/m) ln 10).
int stochastic_greedy_sample_size(int n, int m);

enum class RescoreMeasure { kLOO, kIF };

// After each pick, drops the pick, refits, and rescores the remainder.
SelectionResult greedy_select_with_rescoring(const Dataset& train,
                                             RescoreMeasure measure,
                                             const EvalFn& f,
                                             DiversityFn divfn, double gamma,
                                             int m, double reg = kDefaultReg,
                                             double tol = kDefaultTol);

// Exhaustive optimum of the selection objective; test oracle.
SelectionResult brute_force_select(const ImportanceScores& scores,
                                   DiversityFn divfn, double gamma, int m);

// Default gamma grid: {0} plus 41 log-spaced points over [1e-4, 1e5].
std::vector<double> default_gamma_grid();

TradeoffCurve tradeoff_curve(const ImportanceScores& scores,
                             const DiversityFn& divfn, int m,
                             const std::vector<double>& gamma_grid);

// Largest grid gamma retaining at least 1 - budget_fraction influence.
// *only_zero (optional) reports that no positive gamma qualified.
double gamma_by_influence_budget(const TradeoffCurve& curve,
                                 double budget_fraction,
                                 bool* only_zero = nullptr);

// Gamma whose greedy selection maximizes the pairwise-distance sum of the
// chosen set; ties to the smallest gamma.
double gamma_by_max_pairwise_distance(const ImportanceScores& scores,
                                      const DiversityFn& divfn, int m,
                                      const std::vector<double>& gamma_grid,
                                      const Dataset& ds);

// Deterministic KMeans labels on the non-intercept features.
std::vector<int> kmeans_labels(const Dataset& ds, int k, std::uint64_t seed);

// For each k and each named ranking, the smallest prefix length touching
// all k clusters (n + 1 when the full ranking never covers).
std::map<int, std::map<std::string, int>> cluster_coverage(
    const Dataset& ds,
    const std::map<std::string, std::vector<int>>& chosen_rankings,
    const std::vector<int>& k_grid, std::uint64_t seed = 0);

}  // namespace divine

#endif  // DIVINE_SELECTION_H_
