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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "divine/removal.h"

namespace py = pybind11;
using namespace divine;

namespace {

BoundEval bind_eval(const std::string& eval, const Dataset& eval_ds) {
  return BoundEval{EvalFn(eval_kind_from_name(eval)), &eval_ds};
}

ImportanceScores scores_py(const std::string& measure, const Dataset& train,
                           const std::string& eval, const Dataset& eval_ds,
                           double reg, double tol, int max_permutations,
                           std::uint64_t seed) {
  MCConfig mc;
  mc.max_permutations = max_permutations;
  mc.seed = seed;
  return compute_scores(measure_from_name(measure), train,
                        bind_eval(eval, eval_ds), mc, reg, tol);
}

}  // namespace

PYBIND11_MODULE(_divine, m) {
  m.doc() = "Data valuation, diverse subset selection, and removal";

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("X", &Dataset::X)
      .def_readwrite("y", &Dataset::y)
      .def_readwrite("group", &Dataset::group)
      .def_readwrite("w", &Dataset::w)
      .def_readwrite("ids", &Dataset::ids)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("d", &Dataset::d)
      .def("has_groups", &Dataset::has_groups);

  py::class_<ModelParams>(m, "ModelParams")
      .def_readonly("theta", &ModelParams::theta)
      .def_readonly("reg", &ModelParams::reg)
      .def_readonly("converged", &ModelParams::converged);

  py::class_<ImportanceScores>(m, "ImportanceScores")
      .def_readonly("values", &ImportanceScores::values)
      .def_readonly("measure", &ImportanceScores::measure)
      .def_readonly("eval", &ImportanceScores::eval)
      .def_readonly("additive", &ImportanceScores::additive)
      .def_readonly("converged", &ImportanceScores::converged)
      .def_readonly("variant", &ImportanceScores::variant)
      .def_readonly("unflippable", &ImportanceScores::unflippable);

  py::class_<SelectionResult>(m, "SelectionResult")
      .def_readonly("chosen", &SelectionResult::chosen)
      .def_readonly("gamma", &SelectionResult::gamma)
      .def_readonly("importance_sum", &SelectionResult::importance_sum)
      .def_readonly("diversity_value", &SelectionResult::diversity_value)
      .def_readonly("objective", &SelectionResult::objective);

  py::class_<RemovalRow>(m, "RemovalRow")
      .def_readonly("cumulative_fraction_removed",
                    &RemovalRow::cumulative_fraction_removed)
      .def_readonly("removed_ids", &RemovalRow::removed_ids)
      .def_readonly("accuracy", &RemovalRow::accuracy)
      .def_readonly("unfairness", &RemovalRow::unfairness)
      .def_readonly("eval_value", &RemovalRow::eval_value)
      .def_readonly("all_harmful_exhausted",
                    &RemovalRow::all_harmful_exhausted);

  py::class_<RemovalTrace>(m, "RemovalTrace")
      .def_readonly("rows", &RemovalTrace::rows);

  m.def("toy_fixture", &toy_fixture);
  m.def("generate_synthetic", &generate_synthetic, py::arg("n_main"),
        py::arg("n_outlier"), py::arg("seed"));
  m.def("drop_points", &drop_points, py::arg("ds"), py::arg("indices"));

  m.def("fit", &fit, py::arg("ds"), py::arg("reg") = kDefaultReg,
        py::arg("tol") = kDefaultTol);
  m.def("accuracy", &accuracy);
  m.def(
      "evaluate",
      [](const std::string& eval, const ModelParams& p, const Dataset& ds) {
        return EvalFn(eval_kind_from_name(eval))(p, ds);
      },
      py::arg("eval"), py::arg("params"), py::arg("ds"));

  m.def("scores", &scores_py, py::arg("measure"), py::arg("train"),
        py::arg("eval"), py::arg("eval_ds"), py::arg("reg") = kDefaultReg,
        py::arg("tol") = kDefaultTol, py::arg("max_permutations") = 5000,
        py::arg("seed") = 0);

  m.def(
      "greedy_select",
      [](const ImportanceScores& sc, const Dataset& ds,
         const std::string& divfn, double gamma, int m_, double bandwidth) {
        KernelMatrix kernel = rbf_kernel(ds, bandwidth);
        DiversityFn fn(diversity_kind_from_name(divfn), &kernel);
        return greedy_select(sc, fn, gamma, m_);
      },
      py::arg("scores"), py::arg("ds"), py::arg("divfn"), py::arg("gamma"),
      py::arg("m"), py::arg("bandwidth") = 0.0);

  m.def(
      "run_removal",
      [](const Dataset& train, const Dataset& val, const Dataset& test,
         const std::string& measure, const std::string& eval,
         const std::string& selection, double batch, double max_frac,
         bool recalc, double gamma, const std::string& divfn,
         const std::string& score_split, const std::string& report_split,
         std::uint64_t seed, double reg, double tol) {
        RemovalConfig cfg;
        cfg.measure = measure_from_name(measure);
        cfg.eval = eval_kind_from_name(eval);
        cfg.selection = removal_selection_from_name(selection);
        cfg.batch_fraction = batch;
        cfg.max_fraction = max_frac;
        cfg.recalc_every_batch = recalc;
        cfg.gamma = gamma;
        cfg.divkind = diversity_kind_from_name(divfn);
        cfg.score_split = split_from_name(score_split);
        cfg.report_split = split_from_name(report_split);
        cfg.seed = seed;
        cfg.reg = reg;
        cfg.tol = tol;
        return run_removal(train, val, test, cfg);
      },
      py::arg("train"), py::arg("val"), py::arg("test"), py::arg("measure"),
      py::arg("eval"), py::arg("selection") = "importance",
      py::arg("batch") = 0.05, py::arg("max_frac") = 0.6,
      py::arg("recalc") = false, py::arg("gamma") = 0.0,
      py::arg("divfn") = "fl", py::arg("score_split") = "val",
      py::arg("report_split") = "train", py::arg("seed") = 0,
      py::arg("reg") = kDefaultReg, py::arg("tol") = kDefaultTol);
}
