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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(DIVINE_CLI_PATH) + " " + args;
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / name;
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("toy report reproduces the fixture outcomes") {
  TempDir dir("divine_cli_toy");
  REQUIRE(run_cli("toy --output-dir " + dir.path.string()) == 0);
  json report = json::parse(slurp(dir.path / "toy_report.json"));
  CHECK(report["five_point"]["accuracy"] == 1.0);
  CHECK(report["five_point"]["unfairness"] == 0.0);
  CHECK(report["six_point"]["accuracy"].get<double>() ==
        doctest::Approx(5.0 / 6));
  CHECK(report["six_point"]["unfairness"].get<double>() ==
        doctest::Approx(1.0));
  json manifest = json::parse(slurp(dir.path / "manifest.json"));
  CHECK(manifest["command"] == "toy");
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("value then select at gamma zero agree on the top-m") {
  TempDir dir("divine_cli_value");
  std::string common =
      " --measure if --eval loss --seed 7 -m 5 --output-dir " +
      dir.path.string();
  REQUIRE(run_cli("value" + common) == 0);
  json scores = json::parse(slurp(dir.path / "scores.json"));
  REQUIRE(run_cli("select --gamma 0" + common) == 0);
  json sel = json::parse(slurp(dir.path / "selection.json"));

  std::vector<double> vals =
      scores["values"].get<std::vector<double>>();
  std::vector<int> idx(vals.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return vals[a] > vals[b]; });
  idx.resize(5);
  CHECK(sel["chosen"].get<std::vector<int>>() == idx);
  CHECK(sel["gamma"] == 0.0);
}

TEST_CASE("same config twice is byte-identical") {
  TempDir a("divine_cli_rep_a"), b("divine_cli_rep_b");
  // Seed 11 keeps every (group, label) confusion cell of the val split
  // populated, so the rate-based eval stays defined throughout.
  std::string args = "remove --measure if --eval equal_accuracy --batch 0.1 "
                     "--max 0.2 --seed 11 --output-dir ";
  REQUIRE(run_cli(args + a.path.string()) == 0);
  REQUIRE(run_cli(args + b.path.string()) == 0);
  CHECK(slurp(a.path / "trace.csv") == slurp(b.path / "trace.csv"));

  // tradeoff and synth as well
  std::string t = "tradeoff --measure if --eval loss -m 4 --seed 3 "
                  "--output-dir ";
  REQUIRE(run_cli(t + a.path.string()) == 0);
  REQUIRE(run_cli(t + b.path.string()) == 0);
  CHECK(slurp(a.path / "tradeoff.csv") == slurp(b.path / "tradeoff.csv"));

  std::string s = "synth --n 100 --n-outlier 10 --seed 21 --output-dir ";
  REQUIRE(run_cli(s + a.path.string()) == 0);
  REQUIRE(run_cli(s + b.path.string()) == 0);
  CHECK(slurp(a.path / "dataset.csv") == slurp(b.path / "dataset.csv"));
}

TEST_CASE("DIVINE_SEED overrides the config seed") {
  TempDir a("divine_cli_env_a"), b("divine_cli_env_b"),
      c("divine_cli_env_c");
  std::string args = "synth --n 50 --n-outlier 5 --seed 1 --output-dir ";
  REQUIRE(run_cli(args + a.path.string()) == 0);
  setenv("DIVINE_SEED", "2", 1);
  REQUIRE(run_cli(args + b.path.string()) == 0);
  unsetenv("DIVINE_SEED");
  REQUIRE(run_cli("synth --n 50 --n-outlier 5 --seed 2 --output-dir " +
                  c.path.string()) == 0);
  CHECK(slurp(a.path / "dataset.csv") != slurp(b.path / "dataset.csv"));
  CHECK(slurp(b.path / "dataset.csv") == slurp(c.path / "dataset.csv"));
}

TEST_CASE("config file merges over defaults and rejects unknown keys") {
  TempDir dir("divine_cli_cfg");
  fs::path cfg = dir.path / "cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"dataset": {"n_main": 60}, "seed": 4})";
  }
  REQUIRE(run_cli("synth --config " + cfg.string() + " --output-dir " +
                  dir.path.string()) == 0);
  std::string csv = slurp(dir.path / "dataset.csv");
  // 60 main + 20 default outliers + header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 81);

  {
    std::ofstream out(cfg);
    out << R"({"dataset": {"n_points": 60}})";
  }
  CHECK(run_cli("synth --config " + cfg.string() + " --output-dir " +
                dir.path.string() + " 2>/dev/null") == 1);
}

TEST_CASE("error categories map to exit codes") {
  TempDir dir("divine_cli_err");
  // Unknown eval fn -> config error, exit 1.
  CHECK(run_cli("value --eval nope --output-dir " + dir.path.string() +
                " 2>/dev/null") == 1);
  // Missing config file -> config error.
  CHECK(run_cli("value --config /nonexistent.json --output-dir " +
                dir.path.string() + " 2>/dev/null") == 1);
}
