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

#include "divine/valuation.h"

#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>

#include "divine/rng.h"

namespace divine {
namespace {

ModelParams ZeroModel(int d, double reg) {
  ModelParams p;
  p.theta = Eigen::VectorXd::Zero(d);
  p.reg = reg;
  p.converged = true;
  return p;
}

// Shapley coalition weight |S|! (n-1-|S|)! / n!, computed in log space.
double ShapleyWeight(int s, int n) {
  double lg = std::lgamma(s + 1.0) + std::lgamma(n - s + 0.0) -
              std::lgamma(n + 1.0);
  return std::exp(lg);
}

}  // namespace

ImportanceScores loo_scores(const Dataset& train, const BoundEval& f,
                            double reg, double tol) {
  const int n = train.n();
  if (n < 2) throw FitError("loo_scores: need n >= 2");
  ModelParams full = fit(train, reg, tol);
  double f_full = f(full);
  ImportanceScores out;
  out.values.resize(n);
  out.measure = "LOO";
  out.eval = f.fn.name();
  out.additive = false;
  for (int i = 0; i < n; ++i) {
    ModelParams p;
    try {
      p = fit(drop_points(train, {i}), reg, tol);
    } catch (const FitError& e) {
      throw FitError("loo_scores: fit failed without point " +
                     std::to_string(train.ids[i]) + ": " + e.what());
    }
    out.values(i) = f(p) - f_full;
  }
  return out;
}

ImportanceScores if_scores(const Dataset& train, const BoundEval& f,
                           double reg, double tol) {
  const int n = train.n();
  ModelParams full = fit(train, reg, tol);
  HessianInfo h = hessian(full, train);
  Eigen::LDLT<Eigen::MatrixXd> solver(h.matrix);

  ImportanceScores out;
  out.values.resize(n);
  out.measure = "IF";
  out.eval = f.fn.name();
  if (f.fn.differentiable()) {
    // Eq. 1 with the epsilon_i = -w_i perturbation scale, so group sums
    // are comparable to multi-point retraining.
    out.variant = "gradient";
    out.additive = true;
    Eigen::VectorXd v = solver.solve(f.fn.grad(full, *f.eval_ds));
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd gi =
          grad_point(full, train.X.row(i).transpose(), train.y(i));
      out.values(i) = train.w(i) * v.dot(gi);
    }
  } else {
    // Rate-based f is piecewise constant in theta; linearly approximate
    // the parameters upon dropping x_i instead and re-evaluate f.
    out.variant = "displacement";
    out.additive = false;
    double f_full = f(full);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd gi =
          grad_point(full, train.X.row(i).transpose(), train.y(i));
      ModelParams moved = full;
      moved.theta = full.theta + train.w(i) * solver.solve(gi);
      out.values(i) = f(moved) - f_full;
    }
  }
  return out;
}

ImportanceScores if_local_scores(const Dataset& train,
                                 const Eigen::VectorXd& x_test, double y_test,
                                 double reg, double tol) {
  ModelParams full = fit(train, reg, tol);
  HessianInfo h = hessian(full, train);
  Eigen::VectorXd gt = grad_point(full, x_test, y_test);
  Eigen::VectorXd v = h.matrix.ldlt().solve(gt);
  ImportanceScores out;
  out.values.resize(train.n());
  out.measure = "IF";
  out.eval = "local_loss(test point)";
  out.variant = "gradient";
  out.additive = true;
  for (int i = 0; i < train.n(); ++i) {
    Eigen::VectorXd gi =
        grad_point(full, train.X.row(i).transpose(), train.y(i));
    out.values(i) = train.w(i) * v.dot(gi);
  }
  return out;
}

ImportanceScores shapley_exact(const Dataset& train, const BoundEval& f,
                               double reg, double tol) {
  const int n = train.n();
  if (n > 12) throw FitError("shapley_exact: n > 12");
  const int full_mask = (1 << n) - 1;

  // One fit per coalition, cached by bitmask. Failed fits substitute the
  // empty-model baseline.
  std::vector<double> fval(full_mask + 1);
  for (int mask = 0; mask <= full_mask; ++mask) {
    if (mask == 0) {
      fval[mask] = f(ZeroModel(train.d(), reg));
      continue;
    }
    std::vector<int> dropped;
    for (int i = 0; i < n; ++i)
      if (!(mask >> i & 1)) dropped.push_back(i);
    Dataset sub = drop_points(train, dropped);
    try {
      fval[mask] = f(fit(sub, reg, tol));
    } catch (const FitError&) {
      fval[mask] = fval[0];
      std::fprintf(stderr,
                   "shapley_exact: coalition fit failed, empty-model "
                   "baseline substituted (mask %d)\n",
                   mask);
    }
  }

  ImportanceScores out;
  out.values = Eigen::VectorXd::Zero(n);
  out.measure = "DS_exact";
  out.eval = f.fn.name();
  out.additive = true;
  for (int i = 0; i < n; ++i) {
    for (int mask = 0; mask <= full_mask; ++mask) {
      if (mask >> i & 1) continue;
      int s = __builtin_popcount(static_cast<unsigned>(mask));
      // f decreases when a helpful point joins the coalition.
      out.values(i) +=
          ShapleyWeight(s, n) * (fval[mask] - fval[mask | (1 << i)]);
    }
  }
  return out;
}

ImportanceScores shapley_mc(const Dataset& train, const BoundEval& f,
                            const MCConfig& cfg, double reg, double tol) {
  const int n = train.n();
  if (cfg.max_permutations < 1)
    throw FitError("shapley_mc: max_permutations must be >= 1");
  ModelParams full = fit(train, reg, tol);
  double f_full = f(full);
  double trunc_tol = cfg.truncation_tol >= 0 ? cfg.truncation_tol
                                             : 1e-4 * std::abs(f_full);
  double f_empty = f(ZeroModel(train.d(), reg));

  Rng rng(cfg.seed, "shapley_mc");
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(n);
  std::deque<Eigen::VectorXd> window;
  ImportanceScores out;
  out.measure = "DS_mc";
  out.eval = f.fn.name();
  out.additive = true;
  out.converged = false;

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  int done = 0;
  for (int t = 0; t < cfg.max_permutations; ++t) {
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.UniformInt(i + 1)]);
    double prev = f_empty;
    std::vector<int> prefix;
    bool truncated = false;
    for (int k = 0; k < n; ++k) {
      if (truncated) break;  // remaining marginals contribute zero
      prefix.push_back(perm[k]);
      std::vector<int> dropped;
      for (int i = 0; i < n; ++i)
        if (std::find(prefix.begin(), prefix.end(), i) == prefix.end())
          dropped.push_back(i);
      double cur;
      try {
        cur = f(fit(drop_points(train, dropped), reg, tol));
      } catch (const FitError&) {
        cur = prev;
      }
      sums(perm[k]) += prev - cur;  // positive = helpful
      // Once the prefix value reaches the full value, the remaining
      // marginals are below resolution and are taken as zero.
      if (std::abs(cur - f_full) < trunc_tol) truncated = true;
      prev = cur;
    }
    ++done;
    Eigen::VectorXd mean = sums / done;
    window.push_back(mean);
    if (static_cast<int>(window.size()) > cfg.convergence_window + 1)
      window.pop_front();
    if (static_cast<int>(window.size()) == cfg.convergence_window + 1) {
      double move = (mean - window.front()).norm();
      double scale = mean.norm();
      if (scale > 0 && move / scale < 0.01) {
        out.converged = true;
        break;
      }
    }
  }
  out.values = sums / done;
  return out;
}

ImportanceScores cfp_scores(const Dataset& train, const BoundEval& f,
                            CfpMode mode, double reg, double tol) {
  const int n = train.n();
  ModelParams full = fit(train, reg, tol);
  double f_full = f(full);
  ImportanceScores out;
  out.values.resize(n);
  out.measure = "CFP";
  out.eval = f.fn.name();
  out.additive = false;
  out.variant = mode == CfpMode::kRetrain ? "retrain" : "closed_form";
  out.unflippable.assign(n, false);

  if (mode == CfpMode::kClosedForm) {
    HessianInfo h = hessian(full, train);
    Eigen::LDLT<Eigen::MatrixXd> solver(h.matrix);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd x = train.X.row(i).transpose();
      double y = train.y(i);
      Eigen::VectorXd hx = solver.solve(x);
      double denom = y * x.dot(hx);
      // eps solved so the margin crosses zero, with a slight overshoot so
      // the hard prediction actually flips under the ties-to-+1 rule.
      double eps = full.theta.dot(x) / denom * (1.0 + 1e-6);
      ModelParams moved = full;
      moved.theta = full.theta - eps * y * hx;
      out.values(i) = f(moved) - f_full;
    }
    return out;
  }

  Eigen::VectorXd yhat = predict(full, train);
  for (int i = 0; i < n; ++i) {
    // Penalty method: append a copy with the flipped prediction as label
    // and escalate its weight until the prediction flips.
    Dataset aug;
    aug.X.resize(n + 1, train.d());
    aug.X.topRows(n) = train.X;
    aug.X.row(n) = train.X.row(i);
    aug.y.resize(n + 1);
    aug.y.head(n) = train.y;
    aug.y(n) = -yhat(i);
    if (train.has_groups()) {
      aug.group.resize(n + 1);
      aug.group.head(n) = train.group;
      aug.group(n) = train.group(i);
    }
    aug.ids = train.ids;
    aug.ids.push_back(-1);
    aug.w.resize(n + 1);
    aug.w.head(n) = train.w;

    bool flipped = false;
    ModelParams prime;
    for (double wf = 1.0 / n; wf <= (1 << 20) / static_cast<double>(n);
         wf *= 2) {
      aug.w(n) = wf;
      prime = fit(aug, reg, tol);
      if (predict_one(prime, train.X.row(i).transpose()) != yhat(i)) {
        flipped = true;
        break;
      }
    }
    out.unflippable[i] = !flipped;
    out.values(i) = f(prime) - f_full;
  }
  return out;
}

double group_importance(const ImportanceScores& scores,
                        const std::vector<int>& subset) {
  if (!scores.additive)
    std::fprintf(stderr,
                 "group_importance: %s scores are only approximately "
                 "additive\n",
                 scores.measure.c_str());
  double total = 0.0;
  for (int i : subset) total += scores.values(i);
  return total;
}

}  // namespace divine
