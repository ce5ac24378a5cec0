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

#include "divine/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "divine/rng.h"

namespace divine {
namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim whitespace and CR
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

void FinalizeWeights(Dataset& ds) {
  ds.w = Eigen::VectorXd::Constant(ds.n(), 1.0 / ds.n());
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open csv: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DatasetError("empty csv: " + path);
  std::vector<std::string> header = SplitCsvLine(line);
  auto col_of = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw DatasetError("missing column: " + name);
    return static_cast<int>(it - header.begin());
  };
  std::vector<int> fcols;
  for (const auto& f : schema.feature_columns) fcols.push_back(col_of(f));
  int lcol = col_of(schema.label_column);
  int scol = schema.sensitive_column.empty()
                 ? -1
                 : col_of(schema.sensitive_column);

  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::vector<int> groups;
  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() < header.size())
      throw DatasetError("row " + std::to_string(row_no) + ": too few cells");
    std::vector<double> feats;
    for (size_t k = 0; k < fcols.size(); ++k) {
      const std::string& cell = cells[fcols[k]];
      try {
        size_t pos = 0;
        double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        feats.push_back(v);
      } catch (const std::exception&) {
        throw DatasetError("row " + std::to_string(row_no) + ", column " +
                           schema.feature_columns[k] +
                           ": non-numeric feature cell '" + cell + "'");
      }
    }
    const std::string& lv = cells[lcol];
    double yv;
    if (!schema.label_map.empty()) {
      auto it = schema.label_map.find(lv);
      if (it == schema.label_map.end())
        throw DatasetError("row " + std::to_string(row_no) +
                           ": unmapped label value '" + lv + "'");
      yv = it->second;
    } else {
      yv = std::stod(lv);
    }
    if (yv != 1.0 && yv != -1.0)
      throw DatasetError("row " + std::to_string(row_no) +
                         ": label value '" + lv + "' does not map to -1/+1");
    labels.push_back(yv);
    if (scol >= 0) {
      const std::string& sv = cells[scol];
      int g;
      if (!schema.group_map.empty()) {
        auto it = schema.group_map.find(sv);
        if (it == schema.group_map.end())
          throw DatasetError("row " + std::to_string(row_no) +
                             ": unmapped sensitive value '" + sv + "'");
        g = it->second;
      } else {
        g = static_cast<int>(std::stod(sv));
      }
      if (g != 0 && g != 1)
        throw DatasetError("row " + std::to_string(row_no) +
                           ": sensitive value '" + sv + "' not binary");
      groups.push_back(g);
    }
    rows.push_back(std::move(feats));
  }
  if (rows.empty()) throw DatasetError("csv has no data rows: " + path);

  int n = static_cast<int>(rows.size());
  int d = static_cast<int>(fcols.size()) + 1;
  Dataset ds;
  ds.X.resize(n, d);
  ds.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j + 1 < d; ++j) ds.X(i, j) = rows[i][j];
    ds.X(i, d - 1) = 1.0;
    ds.y(i) = labels[i];
  }
  if (scol >= 0) {
    ds.group.resize(n);
    for (int i = 0; i < n; ++i) ds.group(i) = groups[i];
  }
  ds.ids.resize(n);
  std::iota(ds.ids.begin(), ds.ids.end(), 0);
  FinalizeWeights(ds);
  return ds;
}

Dataset generate_synthetic(int n_main, int n_outlier, std::uint64_t seed) {
  if (n_main <= 0 || n_outlier <= 0)
    throw DatasetError("generate_synthetic: counts must be positive");
  int n = n_main + n_outlier;
  Dataset ds;
  ds.X.resize(n, 3);
  ds.y.resize(n);
  ds.group.resize(n);

  // p(x|y=1) = N([3;3], [2 1; 1 2]), p(x|y=-1) = N([-2;-2], I).
  const double m1x = 3.0, m1y = 3.0, m0x = -2.0, m0y = -2.0;
  // Cholesky of [2 1; 1 2]: [sqrt(2) 0; 1/sqrt(2) sqrt(3/2)].
  const double l11 = std::sqrt(2.0), l21 = 1.0 / std::sqrt(2.0),
               l22 = std::sqrt(1.5);

  auto pdf_pos = [&](double x0, double x1) {
    // det = 3, inverse = (1/3)[2 -1; -1 2]
    double dx = x0 - m1x, dy = x1 - m1y;
    double q = (2 * dx * dx - 2 * dx * dy + 2 * dy * dy) / 3.0;
    return std::exp(-0.5 * q) / (2.0 * M_PI * std::sqrt(3.0));
  };
  auto pdf_neg = [&](double x0, double x1) {
    double dx = x0 - m0x, dy = x1 - m0y;
    return std::exp(-0.5 * (dx * dx + dy * dy)) / (2.0 * M_PI);
  };

  Rng labels(seed, "synthetic/labels");
  Rng feats(seed, "synthetic/features");
  Rng sens(seed, "synthetic/sensitive");
  const double c = std::cos(M_PI / 4.0), s = std::sin(M_PI / 4.0);

  for (int i = 0; i < n; ++i) {
    double yv;
    double x0, x1;
    if (i < n_main) {
      yv = labels.Uniform() < 0.5 ? -1.0 : 1.0;
      double z0 = feats.Normal(), z1 = feats.Normal();
      if (yv > 0) {
        x0 = m1x + l11 * z0;
        x1 = m1y + l21 * z0 + l22 * z1;
      } else {
        x0 = m0x + z0;
        x1 = m0y + z1;
      }
    } else {
      // outlier block: y = +1 drawn from N([-2; 8], I)
      yv = 1.0;
      x0 = -2.0 + feats.Normal();
      x1 = 8.0 + feats.Normal();
    }
    // Sensitive attribute from the rotated-density ratio.
    double r0 = c * x0 - s * x1, r1 = s * x0 + c * x1;
    double pp = pdf_pos(r0, r1), pn = pdf_neg(r0, r1);
    double pa = pp / (pp + pn);
    ds.X(i, 0) = x0;
    ds.X(i, 1) = x1;
    ds.X(i, 2) = 1.0;
    ds.y(i) = yv;
    ds.group(i) = sens.Uniform() < pa ? 0 : 1;
  }
  ds.ids.resize(n);
  std::iota(ds.ids.begin(), ds.ids.end(), 0);
  FinalizeWeights(ds);
  return ds;
}

Dataset toy_fixture() {
  // Square corners, a correctly-labeled far outlier (top left), and a
  // poisoned point (top right) whose sensitive attribute is inconsistent
  // with its column. Coordinates chosen so that the five-point fit is
  // perfect and fair while the six-point fit misclassifies exactly (1,1),
  // giving accuracy 5/6 and equal-accuracy unfairness 1.
  const double pts[6][2] = {{-1, 1},  {1, 1},    {-1, -1},
                            {1, -1},  {-2.2, 1.8}, {1.7, 1.8}};
  const double lab[6] = {-1, -1, 1, 1, -1, 1};
  const int grp[6] = {0, 1, 0, 1, 0, 0};
  Dataset ds;
  ds.X.resize(6, 3);
  ds.y.resize(6);
  ds.group.resize(6);
  for (int i = 0; i < 6; ++i) {
    ds.X(i, 0) = pts[i][0];
    ds.X(i, 1) = pts[i][1];
    ds.X(i, 2) = 1.0;
    ds.y(i) = lab[i];
    ds.group(i) = grp[i];
  }
  ds.ids = {0, 1, 2, 3, 4, 5};
  FinalizeWeights(ds);
  return ds;
}

std::array<Dataset, 3> split(const Dataset& ds, const SplitSpec& spec) {
  if (spec.train_frac <= 0 || spec.val_frac <= 0 || spec.test_frac <= 0)
    throw DatasetError("split: fractions must be positive");
  if (std::abs(spec.train_frac + spec.val_frac + spec.test_frac - 1.0) > 1e-9)
    throw DatasetError("split: fractions must sum to 1");
  int n = ds.n();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(spec.seed, "split");
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.UniformInt(i + 1)]);
  int n_train = static_cast<int>(std::round(spec.train_frac * n));
  int n_val = static_cast<int>(std::round(spec.val_frac * n));
  int n_test = n - n_train - n_val;
  if (n_train <= 0 || n_val <= 0 || n_test <= 0)
    throw DatasetError("split: empty split");
  auto take = [&](int from, int count) {
    std::vector<int> keep(perm.begin() + from, perm.begin() + from + count);
    std::sort(keep.begin(), keep.end());
    Dataset out;
    out.X.resize(count, ds.d());
    out.y.resize(count);
    if (ds.has_groups()) out.group.resize(count);
    out.ids.resize(count);
    for (int i = 0; i < count; ++i) {
      out.X.row(i) = ds.X.row(keep[i]);
      out.y(i) = ds.y(keep[i]);
      if (ds.has_groups()) out.group(i) = ds.group(keep[i]);
      out.ids[i] = ds.ids[keep[i]];
    }
    FinalizeWeights(out);
    return out;
  };
  return {take(0, n_train), take(n_train, n_val), take(n_train + n_val, n_test)};
}

Dataset drop_points(const Dataset& ds, const std::vector<int>& indices) {
  std::vector<bool> dropped(ds.n(), false);
  for (int idx : indices) {
    if (idx < 0 || idx >= ds.n())
      throw DatasetError("drop_points: index out of range: " +
                         std::to_string(idx));
    if (dropped[idx])
      throw DatasetError("drop_points: duplicate index: " +
                         std::to_string(idx));
    dropped[idx] = true;
  }
  int m = ds.n() - static_cast<int>(indices.size());
  Dataset out;
  out.X.resize(m, ds.d());
  out.y.resize(m);
  if (ds.has_groups()) out.group.resize(m);
  out.ids.resize(m);
  int k = 0;
  for (int i = 0; i < ds.n(); ++i) {
    if (dropped[i]) continue;
    out.X.row(k) = ds.X.row(i);
    out.y(k) = ds.y(i);
    if (ds.has_groups()) out.group(k) = ds.group(i);
    out.ids[k] = ds.ids[i];
    ++k;
  }
  FinalizeWeights(out);
  return out;
}

Scaler fit_scaler(const Dataset& train) {
  int d = train.d();
  Scaler s;
  s.mean = Eigen::VectorXd::Zero(d);
  s.scale = Eigen::VectorXd::Ones(d);
  for (int j = 0; j + 1 < d; ++j) {  // intercept exempt
    double mu = train.X.col(j).mean();
    double var = (train.X.col(j).array() - mu).square().mean();
    s.mean(j) = mu;
    s.scale(j) = var > 0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Dataset apply_scaler(const Dataset& ds, const Scaler& s) {
  Dataset out = ds;
  for (int j = 0; j + 1 < ds.d(); ++j)
    out.X.col(j) = (ds.X.col(j).array() - s.mean(j)) / s.scale(j);
  return out;
}

}  // namespace divine
