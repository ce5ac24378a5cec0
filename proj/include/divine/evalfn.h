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

#ifndef DIVINE_EVALFN_H_
#define DIVINE_EVALFN_H_

#include <string>

#include "divine/model.h"

namespace divine {

struct EmptyCellError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EvalKind {
  kLoss,             // unweighted sum of per-point losses
  kLocalLoss,        // loss at one labeled point
  kEqualAccuracy,    // |dTPR| + |dTNR|, in [0, 2]
  kEqualOpportunity, // |P(yhat=1 | a, y=1) - P(yhat=1 | b, y=1)|
  kEqualizedOdds,    // sum_j |P(yhat=1 | a, y=j) - P(yhat=1 | b, y=j)|
  kComposite,        // f_loss + f_unf, unit weights
};

EvalKind eval_kind_from_name(const std::string& name);
std::string eval_kind_name(EvalKind kind);

// Evaluation function f(theta), computed on a fixed dataset. Lower is
// better for every kind. Rate-based kinds use hard predictions and throw
// EmptyCellError naming the missing (group, label) cell.
class EvalFn {
 public:
  explicit EvalFn(EvalKind kind, int local_id = -1)
      : kind_(kind), local_id_(local_id) {}

  double operator()(const ModelParams& p, const Dataset& ds) const;

  // True when f is differentiable through theta (loss-like kinds). The
  // rate-based kinds are step functions of theta.
  bool differentiable() const {
    return kind_ == EvalKind::kLoss || kind_ == EvalKind::kLocalLoss;
  }

  // Gradient of f w.r.t. theta; only valid when differentiable().
  Eigen::VectorXd grad(const ModelParams& p, const Dataset& ds) const;

  EvalKind kind() const { return kind_; }
  int local_id() const { return local_id_; }
  std::string name() const;

 private:
  EvalKind kind_;
  int local_id_;
};

double f_loss(const ModelParams& p, const Dataset& ds);
double f_local_loss(const ModelParams& p, const Dataset& ds, int point_id);
double f_equal_accuracy(const ModelParams& p, const Dataset& ds);
double f_equal_opportunity(const ModelParams& p, const Dataset& ds);
double f_equalized_odds(const ModelParams& p, const Dataset& ds);

// I = f(theta_new) - f(theta_old); positive means the removed content was
// helpful.
double importance_of(const EvalFn& f, const ModelParams& theta_new,
                     const ModelParams& theta_old, const Dataset& ds);

}  // namespace divine

#endif  // DIVINE_EVALFN_H_
