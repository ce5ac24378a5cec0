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

#include "divine/evalfn.h"

#include <cmath>

namespace divine {
namespace {

// P(yhat = 1 | A = g, y = ylab) as an empirical frequency of hard
// predictions. Throws when the (group, label) cell is empty.
double PosRate(const Eigen::VectorXd& yhat, const Dataset& ds, int g,
               double ylab) {
  int cnt = 0, pos = 0;
  for (int i = 0; i < ds.n(); ++i) {
    if (ds.group(i) == g && ds.y(i) == ylab) {
      ++cnt;
      if (yhat(i) == 1.0) ++pos;
    }
  }
  if (cnt == 0) {
    throw EmptyCellError(std::string("empty confusion cell: group ") +
                         (g == 0 ? "a" : "b") + ", label " +
                         (ylab > 0 ? "+1" : "-1"));
  }
  return static_cast<double>(pos) / cnt;
}

void RequireGroups(const Dataset& ds) {
  if (!ds.has_groups())
    throw EmptyCellError("fairness eval on dataset without sensitive column");
}

}  // namespace

double f_loss(const ModelParams& p, const Dataset& ds) {
  double out = 0.0;
  for (int i = 0; i < ds.n(); ++i)
    out += loss_point(p, ds.X.row(i).transpose(), ds.y(i));
  return out;
}

double f_local_loss(const ModelParams& p, const Dataset& ds, int point_id) {
  for (int i = 0; i < ds.n(); ++i)
    if (ds.ids[i] == point_id)
      return loss_point(p, ds.X.row(i).transpose(), ds.y(i));
  throw std::runtime_error("f_local_loss: unknown point id " +
                           std::to_string(point_id));
}

double f_equal_accuracy(const ModelParams& p, const Dataset& ds) {
  RequireGroups(ds);
  Eigen::VectorXd yhat = predict(p, ds);
  double tpr_a = PosRate(yhat, ds, 0, 1.0);
  double tpr_b = PosRate(yhat, ds, 1, 1.0);
  double fpr_a = PosRate(yhat, ds, 0, -1.0);  // 1 - TNR
  double fpr_b = PosRate(yhat, ds, 1, -1.0);
  return std::abs(tpr_a - tpr_b) + std::abs(fpr_a - fpr_b);
}

double f_equal_opportunity(const ModelParams& p, const Dataset& ds) {
  RequireGroups(ds);
  Eigen::VectorXd yhat = predict(p, ds);
  // Table 5 writes a signed difference; wrapped in |.| to keep the
  // lower-is-better contract.
  return std::abs(PosRate(yhat, ds, 0, 1.0) - PosRate(yhat, ds, 1, 1.0));
}

double f_equalized_odds(const ModelParams& p, const Dataset& ds) {
  RequireGroups(ds);
  Eigen::VectorXd yhat = predict(p, ds);
  return std::abs(PosRate(yhat, ds, 0, 1.0) - PosRate(yhat, ds, 1, 1.0)) +
         std::abs(PosRate(yhat, ds, 0, -1.0) - PosRate(yhat, ds, 1, -1.0));
}

double EvalFn::operator()(const ModelParams& p, const Dataset& ds) const {
  switch (kind_) {
    case EvalKind::kLoss:
      return f_loss(p, ds);
    case EvalKind::kLocalLoss:
      return f_local_loss(p, ds, local_id_);
    case EvalKind::kEqualAccuracy:
      return f_equal_accuracy(p, ds);
    case EvalKind::kEqualOpportunity:
      return f_equal_opportunity(p, ds);
    case EvalKind::kEqualizedOdds:
      return f_equalized_odds(p, ds);
    case EvalKind::kComposite:
      return f_loss(p, ds) + f_equal_accuracy(p, ds);
  }
  throw std::runtime_error("unknown eval kind");
}

Eigen::VectorXd EvalFn::grad(const ModelParams& p, const Dataset& ds) const {
  switch (kind_) {
    case EvalKind::kLoss: {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(ds.d());
      for (int i = 0; i < ds.n(); ++i)
        g += grad_point(p, ds.X.row(i).transpose(), ds.y(i));
      return g;
    }
    case EvalKind::kLocalLoss: {
      for (int i = 0; i < ds.n(); ++i)
        if (ds.ids[i] == local_id_)
          return grad_point(p, ds.X.row(i).transpose(), ds.y(i));
      throw std::runtime_error("grad: unknown point id");
    }
    default:
      throw std::runtime_error("grad of a rate-based eval fn is undefined");
  }
}

std::string EvalFn::name() const {
  if (kind_ == EvalKind::kLocalLoss)
    return "local:" + std::to_string(local_id_);
  return eval_kind_name(kind_);
}

EvalKind eval_kind_from_name(const std::string& name) {
  if (name == "loss") return EvalKind::kLoss;
  if (name == "equal_accuracy") return EvalKind::kEqualAccuracy;
  if (name == "equal_opportunity") return EvalKind::kEqualOpportunity;
  if (name == "equalized_odds") return EvalKind::kEqualizedOdds;
  if (name == "loss+unfairness") return EvalKind::kComposite;
  if (name.rfind("local:", 0) == 0) return EvalKind::kLocalLoss;
  throw std::runtime_error("unknown eval fn: " + name);
}

std::string eval_kind_name(EvalKind kind) {
  switch (kind) {
    case EvalKind::kLoss: return "loss";
    case EvalKind::kLocalLoss: return "local";
    case EvalKind::kEqualAccuracy: return "equal_accuracy";
    case EvalKind::kEqualOpportunity: return "equal_opportunity";
    case EvalKind::kEqualizedOdds: return "equalized_odds";
    case EvalKind::kComposite: return "loss+unfairness";
  }
  return "?";
}

double importance_of(const EvalFn& f, const ModelParams& theta_new,
                     const ModelParams& theta_old, const Dataset& ds) {
  return f(theta_new, ds) - f(theta_old, ds);
}

}  // namespace divine
