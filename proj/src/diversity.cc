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

#include "divine/diversity.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divine {

KernelMatrix rbf_kernel(const Dataset& ds, double bandwidth) {
  const int n = ds.n();
  const int d = ds.d() - 1;  // intercept excluded
  Eigen::MatrixXd sq(n, n);
  for (int i = 0; i < n; ++i) {
    sq(i, i) = 0;
    for (int j = i + 1; j < n; ++j) {
      double dist2 =
          (ds.X.row(i).head(d) - ds.X.row(j).head(d)).squaredNorm();
      sq(i, j) = sq(j, i) = dist2;
    }
  }
  double sigma = bandwidth;
  if (sigma <= 0) {
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) dists.push_back(std::sqrt(sq(i, j)));
    if (dists.empty()) throw std::runtime_error("rbf_kernel: single point");
    size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
    double median = dists[mid];
    if (dists.size() % 2 == 0) {
      // lower-middle / upper-middle average for even counts
      double lo = *std::max_element(dists.begin(), dists.begin() + mid);
      median = 0.5 * (lo + median);
    }
    sigma = median;
    if (sigma <= 0)
      throw std::runtime_error("rbf_kernel: all points identical, median 0");
  }
  KernelMatrix out;
  out.bandwidth = sigma;
  out.phi = (-sq.array() / (2.0 * sigma * sigma)).exp();
  return out;
}

DiversityKind diversity_kind_from_name(const std::string& name) {
  if (name == "sr") return DiversityKind::kSR;
  if (name == "fl") return DiversityKind::kFL;
  if (name == "mmd") return DiversityKind::kMMD;
  throw std::runtime_error("unknown diversity fn: " + name);
}

DiversityFn::DiversityFn(DiversityKind kind, const KernelMatrix* kernel)
    : kind_(kind), kernel_(kernel), n_(static_cast<int>(kernel->phi.rows())) {
  kappa_ = kernel_->phi.sum();
  col_sum_ = kernel_->phi.colwise().sum();
  reset();
}

void DiversityFn::reset() {
  selected_.clear();
  in_set_.assign(n_, false);
  intra_sum_ = 0;
  cross_sum_ = 0;
  fl_best_ = Eigen::VectorXd::Zero(n_);
}

double DiversityFn::value() const {
  int m = static_cast<int>(selected_.size());
  switch (kind_) {
    case DiversityKind::kSR:
      return kappa_ - intra_sum_;
    case DiversityKind::kFL:
      return m == 0 ? 0.0 : fl_best_.sum();
    case DiversityKind::kMMD: {
      if (m == 0) return 0.0;
      int mc = fixed_size_ > 0 ? fixed_size_ : m;
      double c1 = 2.0 / (static_cast<double>(n_) * mc);
      double c2 = 1.0 / (static_cast<double>(mc) * mc);
      return c1 * cross_sum_ - c2 * intra_sum_;
    }
  }
  throw std::runtime_error("unknown diversity kind");
}

double DiversityFn::gain(int candidate) const {
  if (candidate < 0 || candidate >= n_ || in_set_[candidate])
    throw std::runtime_error("gain: candidate already selected or invalid");
  const Eigen::MatrixXd& phi = kernel_->phi;
  int m = static_cast<int>(selected_.size());
  switch (kind_) {
    case DiversityKind::kSR: {
      double link = 0;
      for (int v : selected_) link += phi(candidate, v);
      return -(2.0 * link + 1.0);
    }
    case DiversityKind::kFL: {
      double g = 0;
      for (int u = 0; u < n_; ++u)
        g += std::max(0.0, phi(u, candidate) - fl_best_(u));
      return g;
    }
    case DiversityKind::kMMD: {
      double link = 0;
      for (int v : selected_) link += phi(candidate, v);
      double cross2 = cross_sum_ + col_sum_(candidate);
      double intra2 = intra_sum_ + 2.0 * link + 1.0;
      int mc_old = fixed_size_ > 0 ? fixed_size_ : m;
      int mc_new = fixed_size_ > 0 ? fixed_size_ : m + 1;
      double old_val =
          m == 0 ? 0.0
                 : 2.0 / (static_cast<double>(n_) * mc_old) * cross_sum_ -
                       intra_sum_ / (static_cast<double>(mc_old) * mc_old);
      double new_val =
          2.0 / (static_cast<double>(n_) * mc_new) * cross2 -
          intra2 / (static_cast<double>(mc_new) * mc_new);
      return new_val - old_val;
    }
  }
  throw std::runtime_error("unknown diversity kind");
}

void DiversityFn::insert(int candidate) {
  if (candidate < 0 || candidate >= n_ || in_set_[candidate])
    throw std::runtime_error("insert: candidate already selected or invalid");
  const Eigen::MatrixXd& phi = kernel_->phi;
  double link = 0;
  for (int v : selected_) link += phi(candidate, v);
  intra_sum_ += 2.0 * link + 1.0;
  cross_sum_ += col_sum_(candidate);
  for (int u = 0; u < n_; ++u)
    fl_best_(u) = std::max(fl_best_(u), phi(u, candidate));
  selected_.push_back(candidate);
  in_set_[candidate] = true;
}

double DiversityFn::value_of(const std::vector<int>& subset) const {
  const Eigen::MatrixXd& phi = kernel_->phi;
  int m = static_cast<int>(subset.size());
  switch (kind_) {
    case DiversityKind::kSR: {
      double intra = 0;
      for (int u : subset)
        for (int v : subset) intra += phi(u, v);
      return kappa_ - intra;
    }
    case DiversityKind::kFL: {
      if (m == 0) return 0.0;
      double total = 0;
      for (int u = 0; u < n_; ++u) {
        double best = 0;
        for (int v : subset) best = std::max(best, phi(u, v));
        total += best;
      }
      return total;
    }
    case DiversityKind::kMMD: {
      if (m == 0) return 0.0;
      double cross = 0, intra = 0;
      for (int v : subset) cross += col_sum_(v);
      for (int u : subset)
        for (int v : subset) intra += phi(u, v);
      int mc = fixed_size_ > 0 ? fixed_size_ : m;
      return 2.0 / (static_cast<double>(n_) * mc) * cross -
             intra / (static_cast<double>(mc) * mc);
    }
  }
  throw std::runtime_error("unknown diversity kind");
}

}  // namespace divine
