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

// Reference partitions of [psi_min, psi_max] used for comparison:
//   ubw    equal width in sin(psi)
//   esc    equal railway length per beam
//   nubw_m maximize the summed average rate
//   nubw_s minimize the relative rate jump between neighbouring beams
// Each interval then gets the max-min RSNR beam.

#include <string>
#include <vector>

#include "beamforge/channel.hpp"
#include "beamforge/scenario.hpp"

namespace beamforge {

struct Partition {
  std::vector<double> angles;  // phi_1 .. phi_{N+1}
  int N() const { return static_cast<int>(angles.size()) - 1; }
};

Partition ubw_partition(const ScenarioConfig& cfg, int N);
Partition esc_partition(const ScenarioConfig& cfg, int N);

/// Signed railway offset of r(psi) from the foot point (0, y_0), and its inverse.
double railway_offset(const ScenarioConfig& cfg, double psi);
double offset_to_aod(const ScenarioConfig& cfg, double s);

/// Travel time from r(psi_min) to r(phi).
double travel_time(const ScenarioConfig& cfg, double phi);

/// Time integral of ln(1 + pi * SNR(psi(t)) / (phi_b - phi_a)) while the
/// train crosses [phi_a, phi_b], composite trapezoid on `points` nodes.
double avg_rate_integral(const ScenarioConfig& cfg, double phi_a, double phi_b, int points = 200);

double nubw_m_objective(const ScenarioConfig& cfg, const Partition& p);
double nubw_s_objective(const ScenarioConfig& cfg, const Partition& p);

struct PartitionRun {
  Partition partition;
  std::vector<double> objective_history;  // initial value, then one entry per sweep
  int sweeps = 0;
};

/// Cyclic coordinate search started from the UBW partition.
PartitionRun nubw_m_partition(const ScenarioConfig& cfg, int N);
PartitionRun nubw_s_partition(const ScenarioConfig& cfg, int N);

struct MaxMinBeam {
  Eigen::VectorXcd weights;
  double worst_rsnr = 0.0;  // linear, exact over the interval's samples
  double offset_db = 0.0;   // threshold scaling reached by the bisection
};

/// Beam maximizing the worst RSNR over the samples in [phi_a, phi_b),
/// located by bisecting a common threshold offset to 0.05 dB.
MaxMinBeam maxmin_beam(const AoDGrid& grid, const ScenarioConfig& cfg, double phi_a, double phi_b,
                       const SolverParams& params);

/// Codebook with one max-min beam per partition interval.
Codebook partition_codebook(const AoDGrid& grid, const ScenarioConfig& cfg, const Partition& p,
                            const SolverParams& params, const std::string& name);

enum class BenchmarkScheme { ubw, esc, nubw_m, nubw_s };
std::string benchmark_name(BenchmarkScheme s);
/// Throws ConfigError (key "scheme") for unknown names.
BenchmarkScheme parse_benchmark(const std::string& name);
Partition benchmark_partition(const ScenarioConfig& cfg, BenchmarkScheme s, int N);

struct RsnrSummary {
  double min_db = 0.0;
  double max_db = 0.0;
  double spread_db = 0.0;
  int covered = 0;
};

/// Min / max RSNR (dB) over trace points that have an active beam.
RsnrSummary summarize_trace(const RsnrTrace& trace);

}  // namespace beamforge
