// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The beamforge Authors.
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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "beamforge/benchmarks.hpp"
#include "beamforge/cli_io.hpp"
#include "beamforge/coverage_search.hpp"
#include "beamforge/error.hpp"
#include "beamforge/minmax_core.hpp"

namespace py = pybind11;
using namespace beamforge;
using nlohmann::json;

namespace {

RunConfig config_from(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config_json(doc);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "beamforge native core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<RecheckError>(m, "RecheckError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def(
      "canonical_config", [](const std::string& text) { return config_from(text).canonical.dump(); },
      py::arg("config_json"), "Parse a config and return it in SI units with defaults filled.");

  m.def(
      "config_digest", [](const std::string& text) { return config_digest(config_from(text).canonical); },
      py::arg("config_json"));

  m.def(
      "design",
      [](const std::string& text, const std::string& scheme) {
        const RunConfig rc = config_from(text);
        const Scheme s = parse_scheme(scheme);
        Codebook cb;
        {
          py::gil_scoped_release release;
          const AoDGrid g = build_grid(rc.scenario);
          cb = sequential_design(g, rc.scenario, rc.solver, s);
        }
        return codebook_to_json(cb).dump();
      },
      py::arg("config_json"), py::arg("scheme") = "pp_pdg_ms", "Design a codebook; returns codebook JSON.");

  m.def(
      "benchmark",
      [](const std::string& text, const std::string& scheme, int N) {
        const RunConfig rc = config_from(text);
        const BenchmarkScheme b = parse_benchmark(scheme);
        Codebook cb;
        {
          py::gil_scoped_release release;
          const AoDGrid g = build_grid(rc.scenario);
          cb = partition_codebook(g, rc.scenario, benchmark_partition(rc.scenario, b, N), rc.solver, scheme);
        }
        return codebook_to_json(cb).dump();
      },
      py::arg("config_json"), py::arg("scheme"), py::arg("beams"));

  m.def(
      "partition",
      [](const std::string& text, const std::string& scheme, int N) {
        const RunConfig rc = config_from(text);
        return benchmark_partition(rc.scenario, parse_benchmark(scheme), N).angles;
      },
      py::arg("config_json"), py::arg("scheme"), py::arg("beams"));

  m.def(
      "evaluate",
      [](const std::string& text, const std::string& codebook_json) {
        const RunConfig rc = config_from(text);
        const Codebook cb = codebook_from_json(json::parse(codebook_json));
        const AoDGrid g = build_grid(rc.scenario);
        const RsnrTrace t = codebook_rsnr_trace(cb, g, rc.scenario, rc.solver.seed, rc.scenario.sigma_psi);
        const RsnrSummary s = summarize_trace(t);
        py::dict out;
        out["psi"] = t.psi;
        out["rsnr_db"] = [&] {
          std::vector<double> db(t.rsnr.size());
          for (std::size_t k = 0; k < db.size(); ++k) db[k] = t.rsnr[k] > 0.0 ? linear_to_db(t.rsnr[k]) : -INFINITY;
          return db;
        }();
        out["beam"] = t.beam;
        out["switches"] = t.switches;
        out["min_db"] = s.min_db;
        out["max_db"] = s.max_db;
        out["spread_db"] = s.spread_db;
        return out;
      },
      py::arg("config_json"), py::arg("codebook_json"));

  m.def(
      "band",
      [](const std::string& text, double psi, int N_T, double L_th) {
        const RunConfig rc = config_from(text);
        return band(rc.scenario, psi, N_T, rc.scenario.B_f, L_th);
      },
      py::arg("config_json"), py::arg("psi"), py::arg("N_T"), py::arg("L_th") = 0.05);

  m.def(
      "grid",
      [](const std::string& text) {
        const RunConfig rc = config_from(text);
        const AoDGrid g = build_grid(rc.scenario);
        py::dict out;
        out["psi"] = g.psi;
        out["r"] = g.r;
        out["gamma"] = g.gamma;
        return out;
      },
      py::arg("config_json"), "Trajectory samples: angles, distances and normalized gain thresholds.");

  m.def("simplex_threshold", &simplex_threshold, py::arg("c"), py::arg("mass") = 1.0,
        "Euclidean projection of c / mass onto the probability simplex.");

  m.def("unit_modulus_projection", [](const Eigen::VectorXcd& f) { return restore(unit_modulus_projection(lift(f))); },
        py::arg("f"));
}
