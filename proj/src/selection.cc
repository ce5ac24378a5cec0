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

#include "divine/selection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "divine/rng.h"

namespace divine {
namespace {

void Finalize(SelectionResult& r, const Eigen::VectorXd& values,
              const DiversityFn& divfn) {
  r.importance_sum = 0;
  for (int i : r.chosen) r.importance_sum += values(i);
  r.diversity_value = divfn.value_of(r.chosen);
  r.objective = r.importance_sum + r.gamma * r.diversity_value;
}

}  // namespace

SelectionResult greedy_select(const ImportanceScores& scores,
                              DiversityFn divfn, double gamma, int m) {
  const int n = static_cast<int>(scores.values.size());
  if (m > n) throw std::runtime_error("greedy_select: m > n");
  if (gamma < 0) throw std::runtime_error("greedy_select: gamma < 0");
  divfn.reset();
  SelectionResult r;
  r.gamma = gamma;
  std::vector<bool> used(n, false);
  for (int step = 0; step < m; ++step) {
    int best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      double g = scores.values(i) + (gamma > 0 ? gamma * divfn.gain(i) : 0.0);
      if (g > best_gain) {  // ties resolve to the lowest index
        best_gain = g;
        best = i;
      }
    }
    used[best] = true;
    divfn.insert(best);
    r.chosen.push_back(best);
    r.per_step_gains.push_back(best_gain);
  }
  Finalize(r, scores.values, divfn);
  return r;
}

int stochastic_greedy_sample_size(int n, int m) {
  return static_cast<int>(
      std::ceil(static_cast<double>(n) / m * std::log(10.0)));
}

SelectionResult stochastic_greedy_select(const ImportanceScores& scores,
                                         DiversityFn divfn, double gamma,
                                         int m, int s, std::uint64_t seed) {
  const int n = static_cast<int>(scores.values.size());
  if (m > n) throw std::runtime_error("stochastic_greedy: m > n");
  if (s < 1 || s > n) throw std::runtime_error("stochastic_greedy: bad s");
  divfn.reset();
  Rng rng(seed, "stochastic_greedy");
  SelectionResult r;
  r.gamma = gamma;
  std::vector<int> remaining(n);
  std::iota(remaining.begin(), remaining.end(), 0);
  for (int step = 0; step < m; ++step) {
    // Sample min(s, |remaining|) candidates without replacement.
    int avail = static_cast<int>(remaining.size());
    int take = std::min(s, avail);
    for (int i = 0; i < take; ++i)
      std::swap(remaining[i], remaining[i + rng.UniformInt(avail - i)]);
    int best = -1, best_pos = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < take; ++i) {
      int cand = remaining[i];
      double g =
          scores.values(cand) + (gamma > 0 ? gamma * divfn.gain(cand) : 0.0);
      if (g > best_gain || (g == best_gain && cand < best)) {
        best_gain = g;
        best = cand;
        best_pos = i;
      }
    }
    remaining.erase(remaining.begin() + best_pos);
    divfn.insert(best);
    r.chosen.push_back(best);
    r.per_step_gains.push_back(best_gain);
  }
  Finalize(r, scores.values, divfn);
  return r;
}

SelectionResult greedy_select_with_rescoring(const Dataset& train,
                                             RescoreMeasure measure,
                                             const EvalFn& f,
                                             DiversityFn divfn, double gamma,
                                             int m, double reg, double tol) {
  const int n = train.n();
  if (m > n) throw std::runtime_error("rescoring greedy: m > n");
  divfn.reset();
  SelectionResult r;
  r.gamma = gamma;
  std::vector<bool> used(n, false);
  Dataset current = train;
  // current keeps the original positional index in its ids' order via a
  // map from current rows to original rows.
  std::vector<int> row_to_orig(n);
  std::iota(row_to_orig.begin(), row_to_orig.end(), 0);

  Eigen::VectorXd full_scores(n);
  for (int step = 0; step < m; ++step) {
    BoundEval be{f, &current};
    ImportanceScores s = measure == RescoreMeasure::kLOO
                             ? loo_scores(current, be, reg, tol)
                             : if_scores(current, be, reg, tol);
    int best = -1, best_row = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int row = 0; row < current.n(); ++row) {
      int orig = row_to_orig[row];
      double g =
          s.values(row) + (gamma > 0 ? gamma * divfn.gain(orig) : 0.0);
      if (g > best_gain || (g == best_gain && orig < best)) {
        best_gain = g;
        best = orig;
        best_row = row;
      }
    }
    full_scores(best) = s.values(best_row);
    used[best] = true;
    divfn.insert(best);
    r.chosen.push_back(best);
    r.per_step_gains.push_back(best_gain);
    current = drop_points(current, {best_row});
    row_to_orig.erase(row_to_orig.begin() + best_row);
  }
  r.importance_sum = 0;
  for (int i : r.chosen) r.importance_sum += full_scores(i);
  r.diversity_value = divfn.value_of(r.chosen);
  r.objective = r.importance_sum + gamma * r.diversity_value;
  return r;
}

SelectionResult brute_force_select(const ImportanceScores& scores,
                                   DiversityFn divfn, double gamma, int m) {
  const int n = static_cast<int>(scores.values.size());
  if (m > n) throw std::runtime_error("brute_force_select: m > n");
  // C(n, m) guard
  double combos = 1;
  for (int i = 0; i < m; ++i) combos *= static_cast<double>(n - i) / (i + 1);
  if (combos > 1e6)
    throw std::runtime_error("brute_force_select: instance too large");

  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  SelectionResult best;
  best.gamma = gamma;
  double best_obj = -std::numeric_limits<double>::infinity();
  while (true) {
    double imp = 0;
    for (int i : idx) imp += scores.values(i);
    double div = divfn.value_of(idx);
    double obj = imp + gamma * div;
    if (obj > best_obj) {
      best_obj = obj;
      best.chosen = idx;
      best.importance_sum = imp;
      best.diversity_value = div;
      best.objective = obj;
    }
    // next combination
    int k = m - 1;
    while (k >= 0 && idx[k] == n - m + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid = {0.0};
  const int kPoints = 41;
  for (int i = 0; i < kPoints; ++i) {
    double e = -4.0 + 9.0 * i / (kPoints - 1);  // 1e-4 .. 1e5
    grid.push_back(std::pow(10.0, e));
  }
  return grid;
}

TradeoffCurve tradeoff_curve(const ImportanceScores& scores,
                             const DiversityFn& divfn, int m,
                             const std::vector<double>& gamma_grid) {
  if (gamma_grid.empty())
    throw std::runtime_error("tradeoff_curve: empty grid");
  if (std::find(gamma_grid.begin(), gamma_grid.end(), 0.0) ==
      gamma_grid.end())
    throw std::runtime_error("tradeoff_curve: grid must include 0");
  SelectionResult base = greedy_select(scores, divfn.clone(), 0.0, m);
  if (base.importance_sum == 0)
    throw std::runtime_error(
        "tradeoff_curve: zero influence at gamma = 0, cannot normalize");
  TradeoffCurve curve;
  for (double g : gamma_grid) {
    SelectionResult r = greedy_select(scores, divfn.clone(), g, m);
    TradeoffRow row;
    row.gamma = g;
    row.influence_retained_fraction = r.importance_sum / base.importance_sum;
    row.diversity_value = r.diversity_value;
    row.chosen = r.chosen;
    curve.rows.push_back(std::move(row));
  }
  std::sort(curve.rows.begin(), curve.rows.end(),
            [](const TradeoffRow& a, const TradeoffRow& b) {
              return a.gamma < b.gamma;
            });
  return curve;
}

double gamma_by_influence_budget(const TradeoffCurve& curve,
                                 double budget_fraction, bool* only_zero) {
  if (budget_fraction <= 0 || budget_fraction > 1)
    throw std::runtime_error("gamma_by_influence_budget: bad budget");
  double best = 0;
  bool found_positive = false;
  for (const auto& row : curve.rows) {
    if (row.influence_retained_fraction >= 1.0 - budget_fraction &&
        row.gamma >= best) {
      best = row.gamma;
      if (row.gamma > 0) found_positive = true;
    }
  }
  if (only_zero) *only_zero = !found_positive;
  return best;
}

double gamma_by_max_pairwise_distance(const ImportanceScores& scores,
                                      const DiversityFn& divfn, int m,
                                      const std::vector<double>& gamma_grid,
                                      const Dataset& ds) {
  if (gamma_grid.empty())
    throw std::runtime_error("gamma_by_max_pairwise_distance: empty grid");
  int d = ds.d() - 1;
  auto pairwise = [&](const std::vector<int>& s) {
    double total = 0;
    for (size_t a = 0; a < s.size(); ++a)
      for (size_t b = 0; b < s.size(); ++b)
        total += (ds.X.row(s[a]).head(d) - ds.X.row(s[b]).head(d)).norm();
    return total;
  };
  std::vector<double> grid = gamma_grid;
  std::sort(grid.begin(), grid.end());
  double best_gamma = grid.front();
  double best_dist = -1;
  for (double g : grid) {
    SelectionResult r = greedy_select(scores, divfn.clone(), g, m);
    double dist = pairwise(r.chosen);
    if (dist > best_dist + 1e-12) {  // ties keep the smallest gamma
      best_dist = dist;
      best_gamma = g;
    }
  }
  return best_gamma;
}

std::vector<int> kmeans_labels(const Dataset& ds, int k, std::uint64_t seed) {
  const int n = ds.n(), d = ds.d() - 1;
  if (k > n) throw std::runtime_error("kmeans: k > n");
  Eigen::MatrixXd pts = ds.X.leftCols(d);

  for (int attempt = 0; attempt < 2; ++attempt) {
    // Greedy farthest-point init from a seeded start; deterministic.
    Rng rng(seed + attempt, "kmeans");
    std::vector<int> centers_idx = {rng.UniformInt(n)};
    while (static_cast<int>(centers_idx.size()) < k) {
      int far = -1;
      double far_d = -1;
      for (int i = 0; i < n; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (int c : centers_idx)
          nearest =
              std::min(nearest, (pts.row(i) - pts.row(c)).squaredNorm());
        if (nearest > far_d) {
          far_d = nearest;
          far = i;
        }
      }
      centers_idx.push_back(far);
    }
    Eigen::MatrixXd centers(k, d);
    for (int c = 0; c < k; ++c) centers.row(c) = pts.row(centers_idx[c]);

    std::vector<int> labels(n, -1);
    for (int iter = 0; iter < 100; ++iter) {
      bool changed = false;
      for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_d = (pts.row(i) - centers.row(0)).squaredNorm();
        for (int c = 1; c < k; ++c) {
          double dist = (pts.row(i) - centers.row(c)).squaredNorm();
          if (dist < best_d) {
            best_d = dist;
            best = c;
          }
        }
        if (labels[i] != best) {
          labels[i] = best;
          changed = true;
        }
      }
      std::vector<int> count(k, 0);
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, d);
      for (int i = 0; i < n; ++i) {
        ++count[labels[i]];
        sum.row(labels[i]) += pts.row(i);
      }
      bool empty = false;
      for (int c = 0; c < k; ++c) {
        if (count[c] == 0) {
          empty = true;
          break;
        }
        centers.row(c) = sum.row(c) / count[c];
      }
      if (empty) {
        labels.clear();
        break;  // re-seed once, then error
      }
      if (!changed) break;
    }
    if (!labels.empty()) return labels;
  }
  throw std::runtime_error("kmeans: empty cluster after re-seeding");
}

std::map<int, std::map<std::string, int>> cluster_coverage(
    const Dataset& ds,
    const std::map<std::string, std::vector<int>>& chosen_rankings,
    const std::vector<int>& k_grid, std::uint64_t seed) {
  std::map<int, std::map<std::string, int>> out;
  for (int k : k_grid) {
    std::vector<int> labels = kmeans_labels(ds, k, seed);
    for (const auto& [name, ranking] : chosen_rankings) {
      std::vector<bool> seen(k, false);
      int covered = 0, prefix = ds.n() + 1;
      for (size_t i = 0; i < ranking.size(); ++i) {
        int lab = labels[ranking[i]];
        if (!seen[lab]) {
          seen[lab] = true;
          if (++covered == k) {
            prefix = static_cast<int>(i) + 1;
            break;
          }
        }
      }
      out[k][name] = prefix;
    }
  }
  return out;
}

}  // namespace divine
