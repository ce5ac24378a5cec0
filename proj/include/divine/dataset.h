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

#ifndef DIVINE_DATASET_H_
#define DIVINE_DATASET_H_

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace divine {

// Immutable after construction; mutating operations return new values.
// The intercept column (constant 1) is always the last feature column.
struct Dataset {
  Eigen::MatrixXd X;       // n x d, intercept last
  Eigen::VectorXd y;       // labels in {-1, +1}
  Eigen::VectorXi group;   // 0 = group a, 1 = group b, -1 = absent
  Eigen::VectorXd w;       // training weights, uniform 1/n by default
  std::vector<int> ids;    // stable original point ids

  int n() const { return static_cast<int>(X.rows()); }
  int d() const { return static_cast<int>(X.cols()); }
  bool has_groups() const { return group.size() == X.rows(); }
};

struct SplitSpec {
  double train_frac = 0.7;
  double val_frac = 0.2;
  double test_frac = 0.1;
  std::uint64_t seed = 0;
};

// Column roles for CSV ingestion. label_map/group_map declare the value
// encodings explicitly (e.g. "yes" -> +1).
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::string label_column;
  std::string sensitive_column;  // empty = no sensitive attribute
  std::map<std::string, double> label_map;  // value -> -1/+1
  std::map<std::string, int> group_map;     // value -> 0/1
};

// Per-column affine standardization fitted on the train split. The
// intercept column is exempt.
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Dataset load_csv(const std::string& path, const CsvSchema& schema);

// Class-conditional Gaussian mixture from the experimental setup plus a
// block of same-labeled outliers; sensitive attribute drawn from the
// rotated-density ratio.
Dataset generate_synthetic(int n_main, int n_outlier, std::uint64_t seed);

// Six-point poisoned square: four corners, a far outlier, and a poisoned
// point with inconsistent sensitive attribute.
Dataset toy_fixture();

std::array<Dataset, 3> split(const Dataset& ds, const SplitSpec& spec);

// Remaining points keep their original ids; weights re-normalize to
// uniform over the survivors. Indices are positional rows.
Dataset drop_points(const Dataset& ds, const std::vector<int>& indices);

Scaler fit_scaler(const Dataset& train);
Dataset apply_scaler(const Dataset& ds, const Scaler& s);

}  // namespace divine

#endif  // DIVINE_DATASET_H_
