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

#ifndef DIVINE_DIVERSITY_H_
#define DIVINE_DIVERSITY_H_

#include <string>
#include <vector>

#include "divine/dataset.h"

namespace divine {

struct KernelMatrix {
  Eigen::MatrixXd phi;   // symmetric, unit diagonal, entries in (0, 1]
  double bandwidth = 0;  // sigma
};

// phi(u, v) = exp(-||u - v||^2 / (2 sigma^2)); bandwidth <= 0 selects the
// median pairwise Euclidean distance heuristic. The intercept column is
// excluded from distances.
KernelMatrix rbf_kernel(const Dataset& ds, double bandwidth = 0);

enum class DiversityKind { kSR, kFL, kMMD };

DiversityKind diversity_kind_from_name(const std::string& name);

// One of the three submodular diversity functions with O(|S|) / O(n)
// incremental marginal gains. Carries mutable selection state: clone per
// concurrent run.
class DiversityFn {
 public:
  DiversityFn(DiversityKind kind, const KernelMatrix* kernel);

  // MMD only: evaluate c1, c2 at a fixed target size instead of the
  // running |S| (the submodular surrogate). fixed_size <= 0 restores the
  // exact |S|-dependent form.
  void set_fixed_size(int fixed_size) { fixed_size_ = fixed_size; }

  double value() const;
  double gain(int candidate) const;  // R(S + candidate) - R(S)
  void insert(int candidate);
  void reset();
  DiversityFn clone() const { return *this; }

  // From-scratch evaluation of an arbitrary subset, used as the oracle for
  // the incremental bookkeeping.
  double value_of(const std::vector<int>& subset) const;

  const std::vector<int>& selected() const { return selected_; }
  DiversityKind kind() const { return kind_; }

 private:
  DiversityKind kind_;
  const KernelMatrix* kernel_;
  int n_;
  int fixed_size_ = -1;
  double kappa_ = 0;  // SR: total similarity mass of the ground set

  std::vector<int> selected_;
  std::vector<bool> in_set_;
  double intra_sum_ = 0;           // SR/MMD: ordered-pair sum incl. diagonal
  double cross_sum_ = 0;           // MMD: sum over D x S
  Eigen::VectorXd fl_best_;        // FL: current best similarity per point
  Eigen::VectorXd col_sum_;        // column sums of phi, for MMD cross terms
};

}  // namespace divine

#endif  // DIVINE_DIVERSITY_H_
