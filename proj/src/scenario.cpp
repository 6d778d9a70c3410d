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

#include "beamforge/scenario.hpp"

#include <cmath>
#include <string>

#include "beamforge/error.hpp"

namespace beamforge {

namespace {

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, std::string("invariant violated: ") + what);
}

}  // namespace

double ScenarioConfig::scaled_tx_power() const noexcept {
  const double lam = wavelength();
  return P_T * lam * lam * std::pow(r_0, eta - 2.0) /
         (16.0 * kPi * kPi * std::pow(y_0, eta) * std::pow(std::cos(alpha), eta));
}

double ScenarioConfig::snr_scale(double psi) const noexcept {
  return N_T * scaled_tx_power() * std::pow(std::cos(psi + alpha), eta) / P_N;
}

void ScenarioConfig::validate() const {
  require(f_c > 0.0, "f_c", "f_c > 0");
  require(B_f >= 0.0, "B_f", "B_f >= 0");
  require(N_T >= 1, "N_T", "N_T >= 1");
  require(y_0 > 0.0, "y_0", "y_0 > 0");
  require(alpha >= 0.0 && alpha < kPi / 2, "alpha", "0 <= alpha < pi/2");
  require(v > 0.0, "v", "v > 0");
  require(P_T > 0.0, "P_T", "P_T > 0");
  require(P_N > 0.0, "P_N", "P_N > 0");
  require(r_0 > 0.0, "r_0", "r_0 > 0");
  require(eta > 0.0, "eta", "eta > 0");
  require(psi_min < psi_max, "psi_min", "psi_min < psi_max");
  require(aod_in_domain(*this, psi_min), "psi_min", "psi_min in (-pi/2, pi/2 - alpha)");
  require(aod_in_domain(*this, psi_max), "psi_max", "psi_max in (-pi/2, pi/2 - alpha)");
  require(gamma_th > 0.0, "gamma_th", "gamma_th > 0");
  require(eps_t > 0.0 && eps_t < 1.0, "eps_t", "eps_t in (0, 1)");
  require(sigma_psi >= 0.0, "sigma_psi", "sigma_psi >= 0");
  require(p_th > 0.0 && p_th < 1.0, "p_th", "p_th in (0, 1)");
  require(L_th > 0.0 && L_th < 1.0, "L_th", "L_th in (0, 1)");
}

void SolverParams::validate() const {
  require(w_mu > 0.0 && w_mu < 1.0, "w_mu", "0 < w_mu < 1");
  require(w_min > 0.0 && w_min <= w_max && w_max < 1.0, "w_min", "0 < w_min <= w_max < 1");
  require(eps_min > 0.0 && eps_min <= eps_max, "eps_min", "0 < eps_min <= eps_max");
  require(rho_1 > 0.0, "rho_1", "rho_1 > 0");
  require(rho_2_init >= 0.0, "rho_2_init", "rho_2_init >= 0");
  require(delta_rho_2 > 0.0, "delta_rho_2", "delta_rho_2 > 0");
  require(eps_1 > 0.0, "eps_1", "eps_1 > 0");
  require(eps_2 > 0.0, "eps_2", "eps_2 > 0");
  require(eps_f > 0.0, "eps_f", "eps_f > 0");
  require(dykstra_tol > 0.0, "dykstra_tol", "dykstra_tol > 0");
  require(dykstra_max_iter > 0, "dykstra_max_iter", "dykstra_max_iter > 0");
  require(subgrad_max_iter > 0, "subgrad_max_iter", "subgrad_max_iter > 0");
  require(dc_max_iter > 0, "dc_max_iter", "dc_max_iter > 0");
  require(Q_cap > 0, "Q_cap", "Q_cap > 0");
  require(pdg_max_iter > 0, "pdg_max_iter", "pdg_max_iter > 0");
  require(eps_phi >= 0.0, "eps_phi", "eps_phi >= 0");
  require(delta_phi >= 0.0, "delta_phi", "delta_phi >= 0");
  require(delta_phi_samples > 0, "delta_phi_samples", "delta_phi_samples > 0");
  require(max_ts_iter > 0, "max_ts_iter", "max_ts_iter > 0");
  require(working_set_spacing >= 0.0, "working_set_spacing", "working_set_spacing >= 0");
}

ScenarioConfig reference_scenario() {
  ScenarioConfig cfg;
  cfg.f_c = 30e9;
  cfg.eta = 2.0;
  cfg.r_0 = 1.0;
  cfg.P_T = dbm_to_watt(40.0);
  cfg.P_N = dbm_to_watt(-40.0);
  cfg.v = 500.0 / 3.6;
  cfg.alpha = 10.0 * kPi / 180.0;
  cfg.N_T = 32;
  cfg.y_0 = 8.0;
  cfg.psi_min = -1.4284;
  cfg.psi_max = 0.9078;
  cfg.gamma_th = db_to_linear(5.0);
  cfg.eps_t = 0.005;
  return cfg;
}

bool aod_in_domain(const ScenarioConfig& cfg, double psi) noexcept {
  return psi > -kPi / 2 && psi < kPi / 2 - cfg.alpha;
}

std::array<double, 2> aod_to_position(const ScenarioConfig& cfg, double psi) {
  const double tp = std::tan(psi);
  const double denom = 1.0 - std::tan(cfg.alpha) * tp;
  if (!aod_in_domain(cfg, psi) || !(denom > 0.0))
    throw DomainError("aod_to_position: psi outside (-pi/2, pi/2 - alpha)");
  return {cfg.y_0 * tp / denom, cfg.y_0 / denom};
}

double bs_to_relay_distance(const ScenarioConfig& cfg, double psi) {
  const double c = std::cos(psi + cfg.alpha);
  if (!aod_in_domain(cfg, psi) || !(c > 0.0))
    throw DomainError("bs_to_relay_distance: cos(psi + alpha) <= 0");
  return cfg.y_0 * std::cos(cfg.alpha) / c;
}

double aod_at_time(const ScenarioConfig& cfg, double t, const std::array<double, 2>& r_start) {
  const double travelled = cfg.v * t;
  const double num = r_start[0] + travelled * std::cos(cfg.alpha);
  const double den = r_start[1] + travelled * std::sin(cfg.alpha);
  if (!(den > 0.0)) throw DomainError("aod_at_time: relay not in front of the array");
  return std::atan(num / den);
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) noexcept { return 10.0 * std::log10(lin); }
double dbm_to_watt(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace beamforge
