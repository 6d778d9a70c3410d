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

#include <array>
#include <cstdint>

namespace beamforge {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

/// Physical and geometric constants of one railway scenario.
///
/// Everything is stored in SI / linear units: angles in radians, powers in
/// watts, speeds in m/s. Unit conversion happens once, when a config file is
/// parsed (see cli_io).
///
/// The base station is a horizontal ULA with antenna n at ((n-1) * delta_T, 0);
/// the railway is the straight line crossing the y-axis at y_0 with angle
/// alpha to the x-axis. The train moves toward +x at constant speed v.
struct ScenarioConfig {
  double f_c = 30e9;        ///< carrier frequency (Hz)
  double B_f = 0.0;         ///< bandwidth (Hz); 0 = narrowband
  int N_T = 32;             ///< antenna count
  double delta_T = 0.0;     ///< antenna spacing (m); <= 0 selects lambda_c / 2
  double y_0 = 8.0;         ///< railway y-intercept (m)
  double alpha = 0.0;       ///< railway angle (rad)
  double v = 500.0 / 3.6;   ///< train speed (m/s)
  double P_T = 10.0;        ///< transmit power (W)
  double P_N = 1e-7;        ///< noise power (W)
  double eta = 2.0;         ///< path-loss exponent
  double r_0 = 1.0;         ///< reference distance (m)
  double psi_min = -1.0;    ///< design AoD range lower end (rad)
  double psi_max = 1.0;     ///< design AoD range upper end (rad)
  double gamma_th = 1.0;    ///< RSNR threshold (linear)
  double eps_t = 0.005;     ///< sample precision
  double sigma_psi = 0.0;   ///< AoD estimation-error std (rad)
  double p_th = 0.5;        ///< coverage probability threshold
  double L_th = 0.05;       ///< near-field loss threshold used for BAND reports

  double wavelength() const noexcept { return kSpeedOfLight / f_c; }
  double spacing() const noexcept { return delta_T > 0.0 ? delta_T : 0.5 * wavelength(); }

  /// P~_T: transmit power scaled by the reference path loss at the railway
  /// foot point, so that |beta~_m|^2 = N_T * P~_T * cos^eta(psi_m + alpha).
  double scaled_tx_power() const noexcept;

  /// |beta~_m|^2 / P_N at AoD psi.
  double snr_scale(double psi) const noexcept;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Tolerances, penalties and iteration caps for both design schemes.
///
/// `eps_phi` and `delta_phi` are angles; a non-positive value means "derive
/// from the grid at the current beam start" (one sample for eps_phi, twenty
/// samples for delta_phi).
struct SolverParams {
  // SDR + DC
  double rho_1 = 10.0;
  double eps_1 = 1e-6;
  double eps_2 = 1e-7;
  int dc_max_iter = 300;
  double dykstra_tol = 1e-9;
  int dykstra_max_iter = 500;
  int subgrad_max_iter = 30;

  // penalty min-max / PP-PDG
  double rho_2_init = 0.0;
  double delta_rho_2 = 0.1;
  double eps_min = 0.005;
  double eps_max = 0.05;
  double eps_f = 0.01;
  double w_max = 0.5;
  double w_min = 0.003;
  double w_mu = 0.5;
  int Q_cap = 200;
  int pdg_max_iter = 200000;

  // coverage search
  double eps_phi = 0.0;
  double delta_phi = 0.0;
  int delta_phi_samples = 20;
  int max_ts_iter = 5000;
  /// Spacing of the proximal-point working set in sin(psi), in units of
  /// 1/N_T; missed samples are added back on demand. 0 solves on every sample.
  double working_set_spacing = 0.125;

  std::uint64_t seed = 1;

  void validate() const;
};

/// Reference far-field physics (30 GHz, eta = 2, r_0 = 1 m, 40 dBm, -40 dBm, 500 km/h,
/// 10 degrees) with the far-field design range around y_0 = 8 m.
ScenarioConfig reference_scenario();

/// Railway and AoD range accepted by the geometry functions: (-pi/2, pi/2 - alpha).
bool aod_in_domain(const ScenarioConfig& cfg, double psi) noexcept;

/// Relay position r(psi) on the railway.
std::array<double, 2> aod_to_position(const ScenarioConfig& cfg, double psi);

/// Distance from the first BS antenna (origin) to r(psi).
double bs_to_relay_distance(const ScenarioConfig& cfg, double psi);

/// AoD at time t for a train that started at r_start and moves at speed v.
double aod_at_time(const ScenarioConfig& cfg, double t, const std::array<double, 2>& r_start);

double db_to_linear(double db) noexcept;
double linear_to_db(double lin) noexcept;
double dbm_to_watt(double dbm) noexcept;

}  // namespace beamforge
