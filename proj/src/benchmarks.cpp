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

#include "beamforge/benchmarks.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "beamforge/coverage_search.hpp"
#include "beamforge/error.hpp"
#include "beamforge/minmax_core.hpp"

namespace beamforge {

namespace {

constexpr double kSweepTol = 1e-6;
constexpr int kMaxSweeps = 200;
constexpr double kOffsetTolDb = 0.05;

void require_n(int N) {
  if (N < 1) throw ConfigError("N", "partition needs at least one interval");
}

/// Cyclic coordinate search over interior breakpoints: each one is moved to
/// the bounded 1-D minimizer of `cost` between its neighbours, and the move is
/// kept only if it lowers the cost.
template <typename Cost>
PartitionRun coordinate_search(Partition p, Cost cost) {
  PartitionRun run;
  double current = cost(p);
  run.objective_history.push_back(current);
  const int N = p.N();
  for (int sweep = 0; sweep < kMaxSweeps && N > 1; ++sweep) {
    const double before = current;
    for (int k = 1; k < N; ++k) {
      const double lo = p.angles[k - 1];
      const double hi = p.angles[k + 1];
      const double margin = 1e-9 * (hi - lo);
      Partition trial = p;
      auto f = [&](double x) {
        trial.angles[k] = x;
        return cost(trial);
      };
      const auto best = boost::math::tools::brent_find_minima(f, lo + margin, hi - margin, 40);
      if (best.second < current) {
        p.angles[k] = best.first;
        current = best.second;
      }
    }
    run.objective_history.push_back(current);
    run.sweeps = sweep + 1;
    if (before - current < kSweepTol) break;
  }
  run.partition = std::move(p);
  return run;
}

}  // namespace

Partition ubw_partition(const ScenarioConfig& cfg, int N) {
  require_n(N);
  Partition p;
  const double s0 = std::sin(cfg.psi_min);
  const double s1 = std::sin(cfg.psi_max);
  p.angles.resize(N + 1);
  for (int i = 0; i <= N; ++i) p.angles[i] = std::asin(s0 + (s1 - s0) * i / N);
  p.angles.front() = cfg.psi_min;
  p.angles.back() = cfg.psi_max;
  return p;
}

double railway_offset(const ScenarioConfig& cfg, double psi) {
  const double tp = std::tan(psi);
  const double den = std::cos(cfg.alpha) - std::sin(cfg.alpha) * tp;
  if (!aod_in_domain(cfg, psi) || !(den > 0.0)) throw DomainError("railway_offset: psi outside the railway domain");
  return cfg.y_0 * tp / den;
}

double offset_to_aod(const ScenarioConfig& cfg, double s) {
  const double den = cfg.y_0 + s * std::sin(cfg.alpha);
  if (!(den > 0.0)) throw DomainError("offset_to_aod: point not in front of the array");
  return std::atan(s * std::cos(cfg.alpha) / den);
}

Partition esc_partition(const ScenarioConfig& cfg, int N) {
  require_n(N);
  Partition p;
  const double s0 = railway_offset(cfg, cfg.psi_min);
  const double s1 = railway_offset(cfg, cfg.psi_max);
  p.angles.resize(N + 1);
  for (int i = 0; i <= N; ++i) p.angles[i] = offset_to_aod(cfg, s0 + (s1 - s0) * i / N);
  p.angles.front() = cfg.psi_min;
  p.angles.back() = cfg.psi_max;
  return p;
}

double travel_time(const ScenarioConfig& cfg, double phi) {
  return (railway_offset(cfg, phi) - railway_offset(cfg, cfg.psi_min)) / cfg.v;
}

double avg_rate_integral(const ScenarioConfig& cfg, double phi_a, double phi_b, int points) {
  const double width = phi_b - phi_a;
  if (!(width > 0.0)) return 0.0;
  const double sa = railway_offset(cfg, phi_a);
  const double sb = railway_offset(cfg, phi_b);
  const double dt = (sb - sa) / cfg.v / (points - 1);
  double acc = 0.0;
  for (int k = 0; k < points; ++k) {
    const double psi = offset_to_aod(cfg, sa + (sb - sa) * k / (points - 1));
    const double val = std::log1p(kPi * cfg.snr_scale(psi) / width);
    acc += (k == 0 || k == points - 1) ? 0.5 * val : val;
  }
  return acc * dt;
}

double nubw_m_objective(const ScenarioConfig& cfg, const Partition& p) {
  double total = 0.0;
  for (int i = 0; i < p.N(); ++i) total += avg_rate_integral(cfg, p.angles[i], p.angles[i + 1]);
  return total;
}

double nubw_s_objective(const ScenarioConfig& cfg, const Partition& p) {
  const int N = p.N();
  std::vector<double> rate(N);
  for (int i = 0; i < N; ++i) {
    const double dur = travel_time(cfg, p.angles[i + 1]) - travel_time(cfg, p.angles[i]);
    rate[i] = avg_rate_integral(cfg, p.angles[i], p.angles[i + 1]) / dur;
  }
  double total = 0.0;
  for (int i = 1; i < N; ++i) total += std::abs(rate[i] / rate[i - 1] - 1.0);
  return total / N;
}

PartitionRun nubw_m_partition(const ScenarioConfig& cfg, int N) {
  PartitionRun run = coordinate_search(ubw_partition(cfg, N), [&](const Partition& p) { return -nubw_m_objective(cfg, p); });
  for (double& v : run.objective_history) v = -v;
  return run;
}

PartitionRun nubw_s_partition(const ScenarioConfig& cfg, int N) {
  return coordinate_search(ubw_partition(cfg, N), [&](const Partition& p) { return nubw_s_objective(cfg, p); });
}

MaxMinBeam maxmin_beam(const AoDGrid& grid, const ScenarioConfig& cfg, double phi_a, double phi_b,
                       const SolverParams& params) {
  const std::vector<int> samples = coverage_set(grid, phi_a, phi_b, 0.0, cfg.p_th);
  if (samples.empty()) throw SolverError("maxmin_beam: interval holds no trajectory sample");
  const SampleBundle base = SampleBundle::from_grid(grid, samples, params.rho_2_init);

  auto worst_ratio = [&](const Eigen::VectorXcd& w) {
    return (base.gains(lift(w)).array() / base.gamma().array()).minCoeff();
  };

  const int mid = samples[samples.size() / 2];
  Eigen::VectorXcd best = to_constant_modulus(grid.steering.col(mid));
  double lo = 10.0 * std::log10(worst_ratio(best));
  double hi = 10.0 * std::log10((1.0 / base.gamma().array()).minCoeff());
  const std::vector<int> work = thin_coverage(grid, samples, params.working_set_spacing);

  while (hi - lo > kOffsetTolDb) {
    const double trial = 0.5 * (lo + hi);
    const SampleBundle scaled(base.steering(), base.gamma() * std::pow(10.0, trial / 10.0), params.rho_2_init);
    const FeasibilityVerdict v = check_feasible_pp(scaled, lift(best), params, work);
    if (v.feasible) {
      best = v.weights;
      lo = std::max(trial, 10.0 * std::log10(worst_ratio(best)));
    } else {
      hi = trial;
    }
  }

  MaxMinBeam out;
  out.weights = best;
  out.offset_db = lo;
  out.worst_rsnr = std::numeric_limits<double>::infinity();
  for (int m : samples) out.worst_rsnr = std::min(out.worst_rsnr, rsnr(best, grid, cfg, m));
  return out;
}

Codebook partition_codebook(const AoDGrid& grid, const ScenarioConfig& cfg, const Partition& p,
                            const SolverParams& params, const std::string& name) {
  Codebook cb;
  cb.scheme = name;
  for (int i = 0; i < p.N(); ++i) {
    Beam b;
    b.phi_lo = p.angles[i];
    b.phi_hi = p.angles[i + 1];
    b.weights = maxmin_beam(grid, cfg, b.phi_lo, b.phi_hi, params).weights;
    BeamDiagnostics d;
    d.first_sample = grid.lower_index(b.phi_lo);
    d.end_sample = grid.lower_index(b.phi_hi);
    cb.beams.push_back(std::move(b));
    cb.diagnostics.push_back(d);
  }
  return cb;
}

std::string benchmark_name(BenchmarkScheme s) {
  switch (s) {
    case BenchmarkScheme::ubw: return "ubw";
    case BenchmarkScheme::esc: return "esc";
    case BenchmarkScheme::nubw_m: return "nubw_m";
    case BenchmarkScheme::nubw_s: return "nubw_s";
  }
  return "";
}

BenchmarkScheme parse_benchmark(const std::string& name) {
  if (name == "ubw") return BenchmarkScheme::ubw;
  if (name == "esc") return BenchmarkScheme::esc;
  if (name == "nubw_m") return BenchmarkScheme::nubw_m;
  if (name == "nubw_s") return BenchmarkScheme::nubw_s;
  throw ConfigError("scheme", "unknown benchmark scheme '" + name + "' (expected ubw, esc, nubw_m or nubw_s)");
}

Partition benchmark_partition(const ScenarioConfig& cfg, BenchmarkScheme s, int N) {
  switch (s) {
    case BenchmarkScheme::ubw: return ubw_partition(cfg, N);
    case BenchmarkScheme::esc: return esc_partition(cfg, N);
    case BenchmarkScheme::nubw_m: return nubw_m_partition(cfg, N).partition;
    case BenchmarkScheme::nubw_s: return nubw_s_partition(cfg, N).partition;
  }
  return ubw_partition(cfg, N);
}

RsnrSummary summarize_trace(const RsnrTrace& trace) {
  RsnrSummary s;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trace.rsnr.size(); ++k) {
    if (trace.beam[k] < 0) continue;
    const double db = linear_to_db(trace.rsnr[k]);
    lo = std::min(lo, db);
    hi = std::max(hi, db);
    ++s.covered;
  }
  if (s.covered > 0) {
    s.min_db = lo;
    s.max_db = hi;
    s.spread_db = hi - lo;
  }
  return s;
}

}  // namespace beamforge
