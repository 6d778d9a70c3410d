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

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "beamforge/scenario.hpp"

namespace beamforge {

/// The sampled trajectory. Sample m has time t[m], AoD psi[m], distance r[m],
/// gain threshold gamma[m] and steering vector steering.col(m).
struct AoDGrid {
  std::vector<double> t;
  std::vector<double> psi;
  std::vector<double> r;
  std::vector<double> gamma;
  Eigen::MatrixXcd steering;  // N_T x M, unit-norm columns
  int M = 0;
  int N_T = 0;

  /// First index m with psi[m] >= angle (M if none).
  int lower_index(double angle) const;
  /// First index m with psi[m] > angle (M if none).
  int upper_index(double angle) const;
};

struct Beam {
  Eigen::VectorXcd weights;
  double phi_lo = 0.0;
  double phi_hi = 0.0;
};

struct BeamDiagnostics {
  int ts_iterations = 0;      // coverage-angle trials
  long solver_iterations = 0; // PP steps or DC steps, summed over trials
  long inner_iterations = 0;  // PDG or subgradient steps, summed
  int first_sample = 0;
  int end_sample = 0;         // one past the last covered sample
  double seconds = 0.0;
};

struct Codebook {
  std::vector<Beam> beams;
  std::vector<BeamDiagnostics> diagnostics;
  std::string scheme;

  int N() const { return static_cast<int>(beams.size()); }
};

AoDGrid build_grid(const ScenarioConfig& cfg);

/// Near-field ULA response; entry n (0-based) has modulus 1/sqrt(N_T).
Eigen::VectorXcd steering_vector(const ScenarioConfig& cfg, int N_T, double psi, double f, double r);

/// Normalized gain |a_m^H f|^2.
double beam_gain(const Eigen::VectorXcd& weights, const AoDGrid& grid, int m);

/// RSNR of the beam at sample m, from the channel gain and noise power.
double rsnr(const Eigen::VectorXcd& weights, const AoDGrid& grid, const ScenarioConfig& cfg, int m);

/// Same quantity through the per-sample threshold: gamma_th * gain / gamma_m.
double rsnr_from_threshold(const Eigen::VectorXcd& weights, const AoDGrid& grid,
                           const ScenarioConfig& cfg, int m);

/// Standard Gaussian tail probability.
double gaussian_tail(double x) noexcept;

/// Samples served by [phi_lo, phi_hi); probabilistic membership when sigma_psi > 0.
std::vector<int> coverage_set(const AoDGrid& grid, double phi_lo, double phi_hi, double sigma_psi,
                              double p_th);

/// Gain lost by a far-field narrowband beam at distance r.
double nearfield_loss(const ScenarioConfig& cfg, double r, double psi, double f, int N_T);

/// Distance beyond which the loss stays at or below L_th.
double band(const ScenarioConfig& cfg, double psi, int N_T, double B_f, double L_th);

/// Exact recheck: gain >= gamma_m on every listed sample.
bool beam_serves(const Eigen::VectorXcd& weights, const AoDGrid& grid, const std::vector<int>& samples);

/// Restores constant modulus 1/sqrt(N) keeping each entry's phase; a zero
/// entry gets phase 0.
Eigen::VectorXcd to_constant_modulus(const Eigen::VectorXcd& x);

struct RsnrTrace {
  std::vector<double> t;
  std::vector<double> psi;
  std::vector<double> psi_hat;
  std::vector<int> beam;       // -1 when no interval contains psi_hat
  std::vector<double> rsnr;    // linear
  int switches = 0;
};

/// RSNR along the trajectory for samples with psi < psi_max, selecting the
/// beam from a (possibly noisy) AoD estimate.
RsnrTrace codebook_rsnr_trace(const Codebook& codebook, const AoDGrid& grid, const ScenarioConfig& cfg,
                              std::uint64_t rng_seed, double sigma_psi);

}  // namespace beamforge
