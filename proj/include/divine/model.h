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

#ifndef DIVINE_MODEL_H_
#define DIVINE_MODEL_H_

#include <stdexcept>

#include "divine/dataset.h"

namespace divine {

// Weighted-ERM logistic regression. Loss convention is the standard one,
// l = log(1 + exp(-y theta^T x)), prediction sign(theta^T x) with ties to
// +1.
struct ModelParams {
  Eigen::VectorXd theta;
  double reg = 1e-4;
  bool converged = false;
  double final_grad_norm = 0.0;
};

struct HessianInfo {
  Eigen::MatrixXd matrix;
  double damping = 0.0;  // extra damping added beyond reg
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultReg = 1e-4;
inline constexpr double kDefaultTol = 1e-8;

// Full-batch Newton with backtracking line search; minimizes
// sum_i w_i l(x_i, y_i; theta) + (reg/2) ||theta||^2 to gradient norm tol.
ModelParams fit(const Dataset& ds, double reg = kDefaultReg,
                double tol = kDefaultTol);

double loss_point(const ModelParams& p, const Eigen::VectorXd& x, double y);
Eigen::VectorXd grad_point(const ModelParams& p, const Eigen::VectorXd& x,
                           double y);

// H = sum_i w_i s_i (1 - s_i) x_i x_i^T + reg I, plus trace-scaled damping
// when the smallest eigenvalue falls under 1e-8.
HessianInfo hessian(const ModelParams& p, const Dataset& ds);

double predict_one(const ModelParams& p, const Eigen::VectorXd& x);
Eigen::VectorXd predict(const ModelParams& p, const Dataset& ds);
double accuracy(const ModelParams& p, const Dataset& ds);

}  // namespace divine

#endif  // DIVINE_MODEL_H_
