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

#include "beamforge/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "beamforge/error.hpp"
#include "beamforge/parallel.hpp"
#include "beamforge/rng.hpp"

namespace beamforge {

namespace {

constexpr std::size_t kMaxSamples = 50'000'000;
constexpr double kBandScanFloor = 0.1;
constexpr double kBandScanRatio = 1.05;

}  // namespace

int AoDGrid::lower_index(double angle) const {
  return static_cast<int>(std::lower_bound(psi.begin(), psi.end(), angle) - psi.begin());
}

int AoDGrid::upper_index(double angle) const {
  return static_cast<int>(std::upper_bound(psi.begin(), psi.end(), angle) - psi.begin());
}

AoDGrid build_grid(const ScenarioConfig& cfg) {
  cfg.validate();
  AoDGrid g;
  g.N_T = cfg.N_T;
  const auto start = aod_to_position(cfg, cfg.psi_min);
  const double lam = cfg.wavelength();
  const double bw = 1.0 + cfg.B_f / (2.0 * cfg.f_c);

  double t = 0.0;
  double psi = cfg.psi_min;
  while (true) {
    const double r = bs_to_relay_distance(cfg, psi);
    g.t.push_back(t);
    g.psi.push_back(psi);
    g.r.push_back(r);
    if (psi >= cfg.psi_max) break;
    if (g.t.size() >= kMaxSamples)
      throw DomainError("build_grid: psi_max not reached within the sample budget");
    const double delta = std::sqrt(2.0 * r * lam / bw) / cfg.v;
    const double t_next = t + cfg.eps_t * delta;
    const double psi_next = aod_at_time(cfg, t_next, start);
    if (!(psi_next > psi)) throw DomainError("build_grid: AoD stopped increasing before psi_max");
    t = t_next;
    psi = psi_next;
  }
  g.M = static_cast<int>(g.t.size());

  const double ptilde = cfg.scaled_tx_power();
  g.gamma.resize(g.M);
  for (int m = 0; m < g.M; ++m)
    g.gamma[m] = cfg.gamma_th * cfg.P_N /
                 (cfg.N_T * ptilde * std::pow(std::cos(g.psi[m] + cfg.alpha), cfg.eta));

  g.steering.resize(cfg.N_T, g.M);
  parallel_for(static_cast<std::size_t>(g.M), [&](std::size_t m) {
    g.steering.col(static_cast<Eigen::Index>(m)) = steering_vector(cfg, cfg.N_T, g.psi[m], 0.0, g.r[m]);
  });
  return g;
}

Eigen::VectorXcd steering_vector(const ScenarioConfig& cfg, int N_T, double psi, double f, double r) {
  if (!(r > 0.0)) throw DomainError("steering_vector: r must be positive");
  const double k = kPi * (2.0 * cfg.spacing() / cfg.wavelength()) * (1.0 + f / cfg.f_c);
  const double s = std::sin(psi);
  const double c2 = std::cos(psi) * std::cos(psi);
  const double quad = cfg.spacing() / (2.0 * r) * c2;
  const double amp = 1.0 / std::sqrt(static_cast<double>(N_T));
  Eigen::VectorXcd a(N_T);
  for (int n = 0; n < N_T; ++n) {
    const double nn = static_cast<double>(n);
    a[n] = std::polar(amp, -k * (nn * s - quad * nn * nn));
  }
  return a;
}

double beam_gain(const Eigen::VectorXcd& weights, const AoDGrid& grid, int m) {
  return std::norm(grid.steering.col(m).dot(weights));
}

double rsnr(const Eigen::VectorXcd& weights, const AoDGrid& grid, const ScenarioConfig& cfg, int m) {
  return cfg.snr_scale(grid.psi[m]) * beam_gain(weights, grid, m);
}

double rsnr_from_threshold(const Eigen::VectorXcd& weights, const AoDGrid& grid,
                           const ScenarioConfig& cfg, int m) {
  return cfg.gamma_th * beam_gain(weights, grid, m) / grid.gamma[m];
}

double gaussian_tail(double x) noexcept { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

std::vector<int> coverage_set(const AoDGrid& grid, double phi_lo, double phi_hi, double sigma_psi,
                              double p_th) {
  std::vector<int> out;
  if (sigma_psi == 0.0) {
    const int lo = grid.lower_index(phi_lo);
    const int hi = grid.lower_index(phi_hi);
    for (int m = lo; m < hi; ++m) out.push_back(m);
    return out;
  }
  for (int m = 0; m < grid.M; ++m) {
    const double p = gaussian_tail((phi_lo - grid.psi[m]) / sigma_psi) -
                     gaussian_tail((phi_hi - grid.psi[m]) / sigma_psi);
    if (p >= p_th) out.push_back(m);
  }
  return out;
}

double nearfield_loss(const ScenarioConfig& cfg, double r, double psi, double f, int N_T) {
  if (!(r > 0.0)) throw DomainError("nearfield_loss: r must be positive");
  const double lam = cfg.wavelength();
  const double d = cfg.spacing();
  const double lin = -2.0 * kPi * (f / cfg.f_c) * (d / lam) * std::sin(psi);
  const double quad = 2.0 * kPi * (1.0 + f / cfg.f_c) * d * d * std::cos(psi) * std::cos(psi) / (2.0 * r * lam);
  std::complex<double> acc = 0.0;
  for (int n = 0; n < N_T; ++n) {
    const double nn = static_cast<double>(n);
    acc += std::polar(1.0, lin * nn + quad * nn * nn);
  }
  return 1.0 - std::abs(acc) / N_T;
}

double band(const ScenarioConfig& cfg, double psi, int N_T, double B_f, double L_th) {
  // Wideband sweeps are not modelled; the narrowband point stands in for any B_f.
  (void)B_f;
  const double aperture = (N_T - 1) * cfg.spacing();
  const double r_max = std::max(1e3, 100.0 * 2.0 * aperture * aperture / cfg.wavelength());
  auto bad = [&](double r) { return nearfield_loss(cfg, r, psi, 0.0, N_T) > L_th; };

  double last_bad = -1.0;
  for (double r = kBandScanFloor; r <= r_max; r *= kBandScanRatio)
    if (bad(r)) last_bad = r;
  if (last_bad < 0.0) return kBandScanFloor;

  double lo = last_bad;
  double hi = last_bad * kBandScanRatio;
  while ((hi - lo) > 1e-4 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (bad(mid))
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

bool beam_serves(const Eigen::VectorXcd& weights, const AoDGrid& grid, const std::vector<int>& samples) {
  for (int m : samples)
    if (beam_gain(weights, grid, m) < grid.gamma[m]) return false;
  return true;
}

Eigen::VectorXcd to_constant_modulus(const Eigen::VectorXcd& x) {
  const double amp = 1.0 / std::sqrt(static_cast<double>(x.size()));
  Eigen::VectorXcd out(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n)
    out[n] = x[n] == std::complex<double>(0.0, 0.0) ? std::complex<double>(amp, 0.0)
                                                   : std::polar(amp, std::arg(x[n]));
  return out;
}

RsnrTrace codebook_rsnr_trace(const Codebook& codebook, const AoDGrid& grid, const ScenarioConfig& cfg,
                              std::uint64_t rng_seed, double sigma_psi) {
  RsnrTrace tr;
  const int end = grid.lower_index(cfg.psi_max);
  tr.t.assign(grid.t.begin(), grid.t.begin() + end);
  tr.psi.assign(grid.psi.begin(), grid.psi.begin() + end);
  tr.psi_hat.resize(end);
  tr.beam.resize(end);
  tr.rsnr.resize(end);

  std::vector<double> lo(codebook.N());
  for (int i = 0; i < codebook.N(); ++i) lo[i] = codebook.beams[i].phi_lo;

  parallel_for(static_cast<std::size_t>(end), [&](std::size_t k) {
    const int m = static_cast<int>(k);
    const double est = sigma_psi > 0.0 ? grid.psi[m] + sigma_psi * counter_gaussian(rng_seed, k) : grid.psi[m];
    tr.psi_hat[m] = est;
    int beam = -1;
    const auto it = std::upper_bound(lo.begin(), lo.end(), est);
    if (it != lo.begin()) {
      const int i = static_cast<int>(it - lo.begin()) - 1;
      if (est < codebook.beams[i].phi_hi) beam = i;
    }
    tr.beam[m] = beam;
    tr.rsnr[m] = beam < 0 ? 0.0 : rsnr(codebook.beams[beam].weights, grid, cfg, m);
  });

  for (int m = 1; m < end; ++m)
    if (tr.beam[m] != tr.beam[m - 1]) ++tr.switches;
  return tr;
}

}  // namespace beamforge
