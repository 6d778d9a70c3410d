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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "beamforge/channel.hpp"
#include "beamforge/parallel.hpp"

using namespace beamforge;
using cd = std::complex<double>;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig c = reference_scenario();
  c.N_T = 8;
  c.psi_min = -0.3;
  c.psi_max = 0.3;
  c.eps_t = 0.05;
  return c;
}

Eigen::VectorXcd random_cm(int N, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  Eigen::VectorXcd f(N);
  for (int n = 0; n < N; ++n) f[n] = std::polar(1.0 / std::sqrt(double(N)), u(gen));
  return f;
}

// Simpson integration of the Gaussian density from x to x + 12.
double tail_by_quadrature(double x) {
  const int n = 20000;
  const double a = x, b = x + 12.0, h = (b - a) / n;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = a + k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    s += w * std::exp(-0.5 * t * t);
  }
  return s * h / 3.0 / std::sqrt(2.0 * kPi);
}

}  // namespace

TEST_CASE("grid spacing follows the sampling rule") {
  ScenarioConfig c;
  c.f_c = kSpeedOfLight / 0.01;
  c.alpha = 0.0;
  c.y_0 = 8.0;
  c.v = 138.889;
  c.psi_min = 0.0;
  c.psi_max = 0.01;
  c.eps_t = 0.01;
  const AoDGrid g = build_grid(c);
  const double delta = std::sqrt(0.16) / 138.889;
  CHECK(delta == doctest::Approx(2.880e-3).epsilon(1e-3));
  CHECK(g.t[0] == 0.0);
  CHECK(g.r[0] == doctest::Approx(8.0));
  CHECK(g.t[1] == doctest::Approx(0.01 * delta).epsilon(1e-12));
}

TEST_CASE("grid threshold at the broadside of the railway") {
  ScenarioConfig c = reference_scenario();
  c.psi_min = -c.alpha;
  c.psi_max = -c.alpha + 0.01;
  const AoDGrid g = build_grid(c);
  CHECK(g.gamma[0] == doctest::Approx(c.gamma_th * c.P_N / (c.N_T * c.scaled_tx_power())).epsilon(1e-12));
}

TEST_CASE("reference grid invariants") {
  const ScenarioConfig c = reference_scenario();
  const AoDGrid g = build_grid(c);
  REQUIRE(g.M > 0);
  CHECK(g.t[0] == 0.0);
  CHECK(g.psi[0] == c.psi_min);
  CHECK(g.psi[g.M - 1] >= c.psi_max);
  CHECK(g.psi[g.M - 2] < c.psi_max);
  const double lam = c.wavelength();
  for (int m = 0; m + 1 < g.M; ++m) {
    CHECK(g.psi[m + 1] > g.psi[m]);
    CHECK(g.t[m + 1] > g.t[m]);
    const double delta = std::sqrt(2.0 * g.r[m] * lam) / c.v;
    CHECK(g.t[m + 1] - g.t[m] <= c.eps_t * delta + 1e-15);
  }
  for (int m = 0; m < g.M; ++m) {
    CHECK(std::abs(g.steering.col(m).norm() - 1.0) < 1e-12);
    CHECK(g.gamma[m] > 0.0);
  }
}

TEST_CASE("steering vector examples") {
  const ScenarioConfig c = reference_scenario();
  const Eigen::VectorXcd one = steering_vector(c, 1, 0.7, 0.0, 3.0);
  CHECK(std::abs(one[0] - cd(1.0, 0.0)) < 1e-15);

  const Eigen::VectorXcd far = steering_vector(c, 16, 0.0, 0.0, 1e12);
  for (int n = 0; n < 16; ++n) CHECK(std::abs(far[n] - cd(0.25, 0.0)) < 1e-9);

  // Phase as geometric path difference: (2 pi / lambda) * (n d sin(psi) - n^2 d^2 cos^2(psi) / (2 r)).
  const double lam = c.wavelength(), d = c.spacing();
  const Eigen::VectorXcd a = steering_vector(c, 4, 0.3, 0.0, 10.0);
  for (int n = 0; n < 4; ++n) {
    const double path = n * d * std::sin(0.3) - n * n * d * d * std::cos(0.3) * std::cos(0.3) / (2.0 * 10.0);
    const cd want = 0.5 * std::exp(cd(0.0, -2.0 * kPi / lam * path));
    CHECK(std::abs(a[n] - want) < 1e-13);
  }
}

TEST_CASE("beam gain examples") {
  const ScenarioConfig c = small_scenario();
  const AoDGrid g = build_grid(c);
  const Eigen::VectorXcd matched = g.steering.col(3);
  CHECK(beam_gain(matched, g, 3) == doctest::Approx(1.0).epsilon(1e-14));

  ScenarioConfig c2 = c;
  c2.N_T = 2;
  const AoDGrid g2 = build_grid(c2);
  Eigen::VectorXcd orth = g2.steering.col(0);
  orth[1] = -orth[1];
  CHECK(beam_gain(orth, g2, 0) < 1e-28);

  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXcd f = random_cm(c.N_T, gen);
    const int m = trial % g.M;
    cd acc = 0.0;
    for (int n = 0; n < c.N_T; ++n)
      for (int k = 0; k < c.N_T; ++k)
        acc += std::conj(g.steering(n, m)) * f[n] * g.steering(k, m) * std::conj(f[k]);
    const double gain = beam_gain(f, g, m);
    CHECK(gain == doctest::Approx(acc.real()).epsilon(1e-12));
    CHECK(gain <= 1.0 + 1e-12);
  }
}

TEST_CASE("RSNR: two formulas agree and hit the threshold identity") {
  const ScenarioConfig c = small_scenario();
  const AoDGrid g = build_grid(c);
  std::mt19937_64 gen(9);
  for (int m = 0; m < g.M; m += 7) {
    const Eigen::VectorXcd f = random_cm(c.N_T, gen);
    const double a = rsnr(f, g, c, m);
    const double b = rsnr_from_threshold(f, g, c, m);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
    // gain == gamma_m gives exactly gamma_th.
    CHECK(c.snr_scale(g.psi[m]) * g.gamma[m] == doctest::Approx(c.gamma_th).epsilon(1e-12));
  }
  CHECK(rsnr(Eigen::VectorXcd::Zero(c.N_T), g, c, 0) == 0.0);

  ScenarioConfig cb = reference_scenario();
  cb.psi_min = -cb.alpha;
  cb.psi_max = -cb.alpha + 0.01;
  const AoDGrid gb = build_grid(cb);
  const Eigen::VectorXcd matched = gb.steering.col(0) / std::abs(gb.steering(0, 0)) / std::sqrt(double(cb.N_T));
  CHECK(rsnr(matched, gb, cb, 0) == doctest::Approx(cb.N_T * cb.scaled_tx_power() / cb.P_N).epsilon(1e-12));
}

TEST_CASE("coverage set") {
  const ScenarioConfig c = small_scenario();
  const AoDGrid g = build_grid(c);
  CHECK(coverage_set(g, -10.0, 10.0, 0.0, 0.5).size() == static_cast<std::size_t>(g.M));

  const int k = g.M / 2;
  const auto half = coverage_set(g, g.psi[0], g.psi[k], 0.0, 0.5);
  REQUIRE(!half.empty());
  CHECK(half.back() == k - 1);
  CHECK(half.front() == 0);

  for (double x : {-2.0, -0.5, 0.0, 0.7, 1.5, 3.0}) CHECK(gaussian_tail(x) == doctest::Approx(tail_by_quadrature(x)).epsilon(1e-9));

  // Centered sample of a wide interval is included for a demanding p_th.
  const int mid = g.M / 2;
  const auto wide = coverage_set(g, g.psi[mid] - 0.2, g.psi[mid] + 0.2, 0.01, 0.999);
  CHECK(std::find(wide.begin(), wide.end(), mid) != wide.end());

  // sigma -> 0 limit equals the deterministic set on interior samples.
  const double lo = 0.5 * (g.psi[10] + g.psi[11]);
  const double hi = 0.5 * (g.psi[40] + g.psi[41]);
  CHECK(coverage_set(g, lo, hi, 1e-9, 0.5) == coverage_set(g, lo, hi, 0.0, 0.5));
}

TEST_CASE("near-field loss") {
  const ScenarioConfig c = reference_scenario();
  for (double r : {0.2, 1.0, 30.0}) CHECK(nearfield_loss(c, r, 0.3, 0.0, 1) == doctest::Approx(0.0));
  CHECK(nearfield_loss(c, 1e15, 0.3, 0.0, 64) == doctest::Approx(0.0).epsilon(1e-9));

  const double lam = c.wavelength(), d = c.spacing();
  double re = 0.0, im = 0.0;
  for (int n = 0; n < 32; ++n) {
    const double ph = 2.0 * kPi * n * n * d * d / (2.0 * 5.0 * lam);
    re += std::cos(ph);
    im += std::sin(ph);
  }
  const double oracle = 1.0 - std::sqrt(re * re + im * im) / 32.0;
  CHECK(nearfield_loss(c, 5.0, 0.0, 0.0, 32) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("BAND") {
  const ScenarioConfig c = reference_scenario();
  CHECK(band(c, 0.0, 1, 0.0, 0.05) == doctest::Approx(0.1));

  double prev = 0.0;
  for (int n : {8, 16, 32, 64, 128}) {
    const double b = band(c, 0.0, n, 0.0, 0.05);
    CHECK(b >= prev);
    prev = b;
    // Every larger scan distance keeps the loss under the threshold.
    for (double r = b; r < 100.0 * b; r *= 1.05) CHECK(nearfield_loss(c, r, 0.0, 0.0, n) <= 0.05);
    CHECK(nearfield_loss(c, b * (1.0 - 2e-4), 0.0, 0.0, n) > 0.05);
  }
}

TEST_CASE("reference far-field trajectory lies beyond the 32-antenna BAND") {
  const ScenarioConfig c = reference_scenario();
  const AoDGrid g = build_grid(c);
  int outside = 0;
  for (int m = 0; m < g.M; ++m)
    if (g.r[m] < band(c, g.psi[m], 32, 0.0, 0.05)) ++outside;
  CHECK(outside == 0);
}

TEST_CASE("RSNR trace") {
  const ScenarioConfig c = small_scenario();
  const AoDGrid g = build_grid(c);

  Codebook single;
  single.beams.push_back({g.steering.col(g.M / 2), c.psi_min, g.psi[g.M - 1]});
  const RsnrTrace t1 = codebook_rsnr_trace(single, g, c, 1, 0.0);
  CHECK(t1.switches == 0);
  CHECK(static_cast<int>(t1.t.size()) == g.lower_index(c.psi_max));

  Codebook three;
  const int a = g.M / 3, b = 2 * g.M / 3;
  three.beams.push_back({g.steering.col(a / 2), g.psi[0], g.psi[a]});
  three.beams.push_back({g.steering.col((a + b) / 2), g.psi[a], g.psi[b]});
  three.beams.push_back({g.steering.col((b + g.M) / 2), g.psi[b], g.psi[g.M - 1]});
  const RsnrTrace t3 = codebook_rsnr_trace(three, g, c, 1, 0.0);
  CHECK(t3.switches == 2);
  for (std::size_t k = 0; k < t3.beam.size(); ++k) CHECK(t3.beam[k] >= 0);

  // A codebook that meets every threshold stays above gamma_th everywhere.
  for (std::size_t k = 0; k < t3.rsnr.size(); ++k) {
    const int m = static_cast<int>(k);
    if (beam_gain(three.beams[t3.beam[k]].weights, g, m) >= g.gamma[m]) CHECK(t3.rsnr[k] >= c.gamma_th * (1 - 1e-12));
  }

  set_thread_count(1);
  const RsnrTrace n1 = codebook_rsnr_trace(three, g, c, 42, 0.01);
  set_thread_count(4);
  const RsnrTrace n2 = codebook_rsnr_trace(three, g, c, 42, 0.01);
  set_thread_count(0);
  CHECK(n1.psi_hat == n2.psi_hat);
  CHECK(n1.rsnr == n2.rsnr);
  CHECK(n1.beam == n2.beam);
  const RsnrTrace other = codebook_rsnr_trace(three, g, c, 43, 0.01);
  CHECK(other.psi_hat != n1.psi_hat);
}

TEST_CASE("constant-modulus restoration") {
  Eigen::VectorXcd x(3);
  x << cd(3.0, 4.0), cd(0.0, 0.0), cd(-2.0, 0.0);
  const Eigen::VectorXcd y = to_constant_modulus(x);
  const double amp = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(y[0]) == doctest::Approx(amp));
  CHECK(std::arg(y[0]) == doctest::Approx(std::atan2(4.0, 3.0)));
  CHECK(std::abs(y[1] - cd(amp, 0.0)) < 1e-15);
  CHECK(std::arg(y[2]) == doctest::Approx(kPi));
}
