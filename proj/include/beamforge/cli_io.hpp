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

#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "beamforge/benchmarks.hpp"
#include "beamforge/channel.hpp"
#include "beamforge/coverage_search.hpp"
#include "beamforge/scenario.hpp"

namespace beamforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitRecheck = 4;

struct RunConfig {
  ScenarioConfig scenario;
  SolverParams solver;
  nlohmann::json canonical;  // every field in SI units, defaults filled
};

/// Parses {"scenario": {...}, "solver": {...}}. Unit-tagged keys
/// (alpha_deg, v_kmh, P_T_dbm, gamma_th_db, ...) are normalized to SI.
RunConfig parse_config_json(const nlohmann::json& doc);
RunConfig parse_config(const std::filesystem::path& path);

/// Hex SHA-256 of the canonical JSON dump.
std::string config_digest(const nlohmann::json& canonical);

nlohmann::json codebook_to_json(const Codebook& cb);
Codebook codebook_from_json(const nlohmann::json& doc);

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string pattern_csv(const Codebook& cb, const AoDGrid& grid, const ScenarioConfig& cfg);
std::string rsnr_csv(const RsnrTrace& trace);
std::string band_csv(const ScenarioConfig& cfg, int points = 201);

struct RunManifest {
  std::string digest;
  std::string scheme;
  std::uint64_t seed = 0;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> files;
  int N = 0;
  double seconds = 0.0;
  nlohmann::json config;

  nlohmann::json to_json() const;
};

RunManifest run_design(const RunConfig& rc, Scheme scheme, const std::filesystem::path& out_dir);
RunManifest run_band(const RunConfig& rc, const std::filesystem::path& out_dir);
RunManifest run_benchmark(const RunConfig& rc, BenchmarkScheme scheme, int N, const std::filesystem::path& out_dir);

struct EvaluationReport {
  RsnrSummary summary;
  bool feasible = false;  // every covered sample meets gamma_th (sigma_psi = 0 recheck)
  int switches = 0;
};
EvaluationReport run_evaluate(const RunConfig& rc, const Codebook& cb, const std::filesystem::path& out_dir);

struct ComparisonRow {
  std::string scheme;
  int N = 0;
  double min_rsnr_db = 0.0;
  double max_rsnr_db = 0.0;
  double spread_db = 0.0;
  double seconds = 0.0;
};

/// Runs each scheme (design or benchmark name) on the same scenario.
/// Benchmarks use `beams` when given, otherwise the pp_pdg_ms beam count
/// (designing it first if it is not in the list).
std::vector<ComparisonRow> compare_schemes(const RunConfig& rc, const std::vector<std::string>& schemes,
                                           std::optional<int> beams = std::nullopt);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

/// Entry point of the `beamforge` command line tool.
int cli_main(int argc, char** argv);

}  // namespace beamforge
