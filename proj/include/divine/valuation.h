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

#ifndef DIVINE_VALUATION_H_
#define DIVINE_VALUATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "divine/evalfn.h"

namespace divine {

// f evaluated on a fixed split; what the valuation measures score against.
struct BoundEval {
  EvalFn fn;
  const Dataset* eval_ds;

  double operator()(const ModelParams& p) const { return fn(p, *eval_ds); }
};

struct ImportanceScores {
  Eigen::VectorXd values;     // indexed like the scored training set
  std::string measure;        // LOO, IF, DS_exact, DS_mc, CFP
  std::string eval;           // eval fn descriptor
  bool additive = false;      // group scores may be summed exactly
  bool converged = true;      // MC only
  std::string variant;        // e.g. IF gradient vs displacement form
  std::vector<bool> unflippable;  // CFP only
};

struct MCConfig {
  int max_permutations = 5000;
  double truncation_tol = -1.0;  // < 0: default 1e-4 * f(theta_hat)
  int convergence_window = 100;
  std::uint64_t seed = 0;
};

enum class CfpMode { kRetrain, kClosedForm };

// Exact leave-one-out retraining, n fits. Positive = helpful.
ImportanceScores loo_scores(const Dataset& train, const BoundEval& f,
                            double reg = kDefaultReg,
                            double tol = kDefaultTol);

// Influence-function scores. For differentiable f this is Eq. 1,
// I_i = grad f(theta)^T H^-1 grad l_i, via one linear solve plus n dot
// products. Rate-based f falls back to the parameter-displacement variant
// theta_i = theta + w_i H^-1 grad l_i and returns f(theta_i) - f(theta);
// the variant used is recorded on the result.
ImportanceScores if_scores(const Dataset& train, const BoundEval& f,
                           double reg = kDefaultReg,
                           double tol = kDefaultTol);

// Influence of each training point on one labeled test point's loss.
ImportanceScores if_local_scores(const Dataset& train,
                                 const Eigen::VectorXd& x_test, double y_test,
                                 double reg = kDefaultReg,
                                 double tol = kDefaultTol);

// Exact Data Shapley by subset enumeration (2^n fits, n <= 12). The empty
// coalition is the zero model.
ImportanceScores shapley_exact(const Dataset& train, const BoundEval& f,
                               double reg = kDefaultReg,
                               double tol = kDefaultTol);

// Truncated-permutation Monte Carlo Data Shapley.
ImportanceScores shapley_mc(const Dataset& train, const BoundEval& f,
                            const MCConfig& cfg, double reg = kDefaultReg,
                            double tol = kDefaultTol);

// Counterfactual-prediction scores: f(theta') - f(theta) where theta'
// minimizes empirical risk subject to flipping the point's prediction.
// Retrain mode uses the escalating-weight flipped-copy penalty method;
// closed form uses the Appendix B parameter update.
ImportanceScores cfp_scores(const Dataset& train, const BoundEval& f,
                            CfpMode mode, double reg = kDefaultReg,
                            double tol = kDefaultTol);

// Sum of scores over a subset of points (exact only when additive).
double group_importance(const ImportanceScores& scores,
                        const std::vector<int>& subset);

}  // namespace divine

#endif  // DIVINE_VALUATION_H_
