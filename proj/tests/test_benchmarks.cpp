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

#include "beamforge/benchmarks.hpp"
#include "beamforge/error.hpp"

using namespace beamforge;

namespace {

double arc(const ScenarioConfig& c, double a, double b) {
  const auto pa = aod_to_position(c, a);
  const auto pb = aod_to_position(c, b);
  return std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
}

ScenarioConfig small_scenario() {
  ScenarioConfig c = reference_scenario();
  c.N_T = 8;
  c.psi_min = -0.3;
  c.psi_max = 0.1;
  c.eps_t = 0.05;
  return c;
}

void check_partition(const Partition& p, const ScenarioConfig& c, int N) {
  REQUIRE(p.N() == N);
  CHECK(p.angles.front() == c.psi_min);
  CHECK(p.angles.back() == c.psi_max);
  for (int i = 0; i < N; ++i) CHECK(p.angles[i] < p.angles[i + 1]);
}

}  // namespace

TEST_CASE("uniform beam-width partition") {
  const ScenarioConfig c = reference_scenario();
  const Partition one = ubw_partition(c, 1);
  CHECK(one.angles == std::vector<double>{c.psi_min, c.psi_max});
  const Partition p = ubw_partition(c, 8);
  check_partition(p, c, 8);
  const double step = (std::sin(c.psi_max) - std::sin(c.psi_min)) / 8.0;
  for (int i = 0; i < 8; ++i) CHECK(std::sin(p.angles[i + 1]) - std::sin(p.angles[i]) == doctest::Approx(step).epsilon(1e-12));
  CHECK(p.angles[4] == doctest::Approx(std::asin(std::sin(c.psi_min) + 4.0 * step)).epsilon(1e-14));
  CHECK_THROWS_AS(ubw_partition(c, 0), ConfigError);
}

TEST_CASE("equal railway coverage partition") {
  const ScenarioConfig c = reference_scenario();
  CHECK(esc_partition(c, 1).angles == std::vector<double>{c.psi_min, c.psi_max});
  const Partition p = esc_partition(c, 8);
  check_partition(p, c, 8);
  const double total = arc(c, c.psi_min, c.psi_max);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(arc(c, p.angles[i], p.angles[i + 1]) - total / 8.0) <= 1e-9 * total);

  SUBCASE("axis-aligned railway is uniform in x") {
    ScenarioConfig z = c;
    z.alpha = 0.0;
    z.psi_max = 1.2;
    const Partition q = esc_partition(z, 5);
    const double x0 = z.y_0 * std::tan(z.psi_min);
    const double x1 = z.y_0 * std::tan(z.psi_max);
    for (int i = 0; i <= 5; ++i) CHECK(z.y_0 * std::tan(q.angles[i]) == doctest::Approx(x0 + (x1 - x0) * i / 5.0).epsilon(1e-12));
  }
  SUBCASE("offset map round trip") {
    for (double psi = -1.4; psi < 1.3; psi += 0.05) CHECK(offset_to_aod(c, railway_offset(c, psi)) == doctest::Approx(psi).epsilon(1e-12));
  }
}

TEST_CASE("average-rate integral") {
  const ScenarioConfig c = reference_scenario();
  CHECK(avg_rate_integral(c, 0.1, 0.1) == 0.0);
  const double base = avg_rate_integral(c, -0.5, 0.2);
  CHECK(base > 0.0);
  ScenarioConfig half = c;
  half.P_T *= 0.5;
  CHECK(avg_rate_integral(half, -0.5, 0.2) < base);
  for (auto [a, b] : {std::pair{-1.4284, -1.2}, std::pair{-0.5, 0.2}, std::pair{0.3, 0.9078}}) {
    const double coarse = avg_rate_integral(c, a, b, 200);
    const double fine = avg_rate_integral(c, a, b, 2000);
    CHECK(std::abs(coarse - fine) <= 1e-4 * fine);
  }
  CHECK(travel_time(c, c.psi_min) == 0.0);
  CHECK(travel_time(c, 0.0) > travel_time(c, -0.5));
}

TEST_CASE("rate-maximizing partition") {
  const ScenarioConfig c = reference_scenario();
  const PartitionRun one = nubw_m_partition(c, 1);
  CHECK(one.partition.angles == std::vector<double>{c.psi_min, c.psi_max});
  const PartitionRun r = nubw_m_partition(c, 8);
  check_partition(r.partition, c, 8);
  for (std::size_t k = 1; k < r.objective_history.size(); ++k) CHECK(r.objective_history[k] >= r.objective_history[k - 1]);
  const double obj = nubw_m_objective(c, r.partition);
  CHECK(obj == doctest::Approx(r.objective_history.back()).epsilon(1e-12));
  CHECK(obj >= nubw_m_objective(c, ubw_partition(c, 8)));
  CHECK(obj >= nubw_m_objective(c, esc_partition(c, 8)));
}

TEST_CASE("rate-balancing partition") {
  const ScenarioConfig c = reference_scenario();
  CHECK(nubw_s_objective(c, ubw_partition(c, 1)) == 0.0);
  const PartitionRun r = nubw_s_partition(c, 8);
  check_partition(r.partition, c, 8);
  for (std::size_t k = 1; k < r.objective_history.size(); ++k) CHECK(r.objective_history[k] <= r.objective_history[k - 1]);
  CHECK(r.objective_history.back() <= nubw_s_objective(c, ubw_partition(c, 8)));

  SUBCASE("symmetric geometry balances around the broadside") {
    ScenarioConfig s = c;
    s.alpha = 0.0;
    s.psi_min = -0.8;
    s.psi_max = 0.8;
    const PartitionRun two = nubw_s_partition(s, 2);
    CHECK(std::abs(two.partition.angles[1]) < 1e-3);
    CHECK(two.objective_history.back() < 1e-3);
  }
}

TEST_CASE("benchmark names") {
  for (auto s : {BenchmarkScheme::ubw, BenchmarkScheme::esc, BenchmarkScheme::nubw_m, BenchmarkScheme::nubw_s})
    CHECK(parse_benchmark(benchmark_name(s)) == s);
  CHECK_THROWS_AS(parse_benchmark("nope"), ConfigError);
}

TEST_CASE("max-min beam fit") {
  const ScenarioConfig c = small_scenario();
  const AoDGrid g = build_grid(c);
  SolverParams p;

  SUBCASE("single sample gets the matched beam") {
    const double a = g.psi[10];
    const double b = g.psi[11];
    const MaxMinBeam m = maxmin_beam(g, c, a, b, p);
    CHECK(m.worst_rsnr == doctest::Approx(c.snr_scale(g.psi[10])).epsilon(1e-3));
  }
  SUBCASE("worst RSNR matches a direct recheck and shrinks with the interval") {
    const double a = g.psi[0];
    double prev = std::numeric_limits<double>::infinity();
    for (int end : {20, 60, 120}) {
      const MaxMinBeam m = maxmin_beam(g, c, a, g.psi[end], p);
      double direct = std::numeric_limits<double>::infinity();
      for (int k = 0; k < end; ++k) direct = std::min(direct, rsnr(m.weights, g, c, k));
      CHECK(m.worst_rsnr == doctest::Approx(direct).epsilon(1e-12));
      // Nested intervals, allowing the 0.05 dB bisection resolution.
      CHECK(linear_to_db(m.worst_rsnr) <= linear_to_db(prev) + 0.05);
      prev = m.worst_rsnr;
    }
  }
  SUBCASE("partition codebook covers the range") {
    const Codebook cb = partition_codebook(g, c, ubw_partition(c, 3), p, "ubw");
    REQUIRE(cb.N() == 3);
    CHECK(cb.beams.front().phi_lo == c.psi_min);
    CHECK(cb.beams.back().phi_hi == c.psi_max);
    for (int i = 0; i + 1 < 3; ++i) CHECK(cb.beams[i].phi_hi == cb.beams[i + 1].phi_lo);
    for (const Beam& b : cb.beams)
      for (int n = 0; n < c.N_T; ++n) CHECK(std::abs(std::abs(b.weights[n]) - 1.0 / std::sqrt(8.0)) < 1e-12);
  }
}

TEST_CASE("trace summary") {
  RsnrTrace t;
  t.rsnr = {10.0, 100.0, 0.0, 1000.0};
  t.beam = {0, 0, -1, 1};
  const RsnrSummary s = summarize_trace(t);
  CHECK(s.covered == 3);
  CHECK(s.min_db == doctest::Approx(10.0));
  CHECK(s.max_db == doctest::Approx(30.0));
  CHECK(s.spread_db == doctest::Approx(20.0));
}
