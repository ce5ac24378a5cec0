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

#include "divine/model.h"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace divine {
namespace {

// log(1 + exp(-m)) without overflow.
double SoftplusNeg(double m) {
  if (m > 0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

double Objective(const Dataset& ds, const Eigen::VectorXd& theta, double reg) {
  Eigen::VectorXd margins = ds.y.array() * (ds.X * theta).array();
  double out = 0.5 * reg * theta.squaredNorm();
  for (int i = 0; i < ds.n(); ++i) out += ds.w(i) * SoftplusNeg(margins(i));
  return out;
}

}  // namespace

ModelParams fit(const Dataset& ds, double reg, double tol) {
  if (reg < 0) throw FitError("fit: reg must be >= 0");
  const int n = ds.n(), d = ds.d();
  ModelParams p;
  p.reg = reg;
  p.theta = Eigen::VectorXd::Zero(d);

  const int kMaxIter = 500;
  double obj = Objective(ds, p.theta, reg);
  for (int iter = 0; iter < kMaxIter; ++iter) {
    Eigen::VectorXd margins = ds.y.array() * (ds.X * p.theta).array();
    Eigen::VectorXd sig(n);  // sigma(-m) = P(mistake)
    for (int i = 0; i < n; ++i) sig(i) = 1.0 / (1.0 + std::exp(margins(i)));
    Eigen::VectorXd g =
        -(ds.X.transpose() * (ds.w.array() * sig.array() * ds.y.array())
                                 .matrix()) +
        reg * p.theta;
    p.final_grad_norm = g.norm();
    if (p.final_grad_norm <= tol) {
      p.converged = true;
      return p;
    }
    Eigen::VectorXd diag =
        ds.w.array() * sig.array() * (1.0 - sig.array());
    Eigen::MatrixXd h = ds.X.transpose() * diag.asDiagonal() * ds.X;
    h.diagonal().array() += reg > 0 ? reg : 1e-10;
    Eigen::VectorXd step = h.ldlt().solve(-g);
    // Backtracking Armijo line search.
    double t = 1.0;
    double slope = g.dot(step);
    for (int ls = 0; ls < 60; ++ls) {
      double cand = Objective(ds, p.theta + t * step, reg);
      if (cand <= obj + 1e-4 * t * slope) {
        p.theta += t * step;
        obj = cand;
        break;
      }
      t *= 0.5;
      if (ls == 59) throw FitError("fit: line search failed");
    }
  }
  // Final gradient check.
  Eigen::VectorXd margins = ds.y.array() * (ds.X * p.theta).array();
  Eigen::VectorXd sig(n);
  for (int i = 0; i < n; ++i) sig(i) = 1.0 / (1.0 + std::exp(margins(i)));
  Eigen::VectorXd g =
      -(ds.X.transpose() *
        (ds.w.array() * sig.array() * ds.y.array()).matrix()) +
      reg * p.theta;
  p.final_grad_norm = g.norm();
  if (p.final_grad_norm > tol)
    throw FitError("fit: no convergence within iteration budget, |g| = " +
                   std::to_string(p.final_grad_norm));
  p.converged = true;
  return p;
}

double loss_point(const ModelParams& p, const Eigen::VectorXd& x, double y) {
  return SoftplusNeg(y * p.theta.dot(x));
}

Eigen::VectorXd grad_point(const ModelParams& p, const Eigen::VectorXd& x,
                           double y) {
  double m = y * p.theta.dot(x);
  double s = 1.0 / (1.0 + std::exp(m));  // sigma(-m)
  return -s * y * x;
}

HessianInfo hessian(const ModelParams& p, const Dataset& ds) {
  const int n = ds.n(), d = ds.d();
  Eigen::VectorXd margins = ds.y.array() * (ds.X * p.theta).array();
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) {
    double s = 1.0 / (1.0 + std::exp(margins(i)));
    diag(i) = ds.w(i) * s * (1.0 - s);
  }
  HessianInfo info;
  info.matrix = ds.X.transpose() * diag.asDiagonal() * ds.X;
  info.matrix.diagonal().array() += p.reg;
  info.matrix = 0.5 * (info.matrix + info.matrix.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info.matrix);
  if (es.eigenvalues().minCoeff() < 1e-8) {
    info.damping = 1e-3 * info.matrix.trace() / d;
    info.matrix.diagonal().array() += info.damping;
  }
  return info;
}

double predict_one(const ModelParams& p, const Eigen::VectorXd& x) {
  if (x.size() != p.theta.size())
    throw FitError("predict: dimension mismatch");
  return p.theta.dot(x) >= 0 ? 1.0 : -1.0;  // ties to +1
}

Eigen::VectorXd predict(const ModelParams& p, const Dataset& ds) {
  if (ds.d() != p.theta.size())
    throw FitError("predict: dimension mismatch");
  Eigen::VectorXd scores = ds.X * p.theta;
  Eigen::VectorXd out(ds.n());
  for (int i = 0; i < ds.n(); ++i) out(i) = scores(i) >= 0 ? 1.0 : -1.0;
  return out;
}

double accuracy(const ModelParams& p, const Dataset& ds) {
  Eigen::VectorXd yhat = predict(p, ds);
  double total = 0.0, correct = 0.0;
  for (int i = 0; i < ds.n(); ++i) {
    total += ds.w(i);
    if (yhat(i) == ds.y(i)) correct += ds.w(i);
  }
  return correct / total;
}

}  // namespace divine
