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

#include "beamforge/coverage_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "beamforge/error.hpp"
#include "beamforge/rng.hpp"
#include "beamforge/sdr_dc.hpp"

namespace beamforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool verbose() {
  static const bool on = [] {
    const char* e = std::getenv("BEAMFORGE_VERBOSE");
    return e != nullptr && *e != '\0' && *e != '0';
  }();
  return on;
}

struct Outcome {
  bool feasible = false;
  bool certified_infeasible = false;
  Eigen::VectorXcd weights;
  long steps = 0;
  long inner = 0;
};

Outcome run_trial(const AoDGrid& grid, const std::vector<int>& samples, const SolverParams& params,
                  TrialSolver solver, std::uint64_t seed) {
  Outcome o;
  const SampleBundle bundle = SampleBundle::from_grid(grid, samples, params.rho_2_init);
  if (solver == TrialSolver::sdr) {
    const SdrVerdict v = check_feasible_sdr(bundle, params);
    o.feasible = v.feasible;
    o.certified_infeasible = v.certified_infeasible;
    o.weights = v.weights;
    o.steps = v.dc_steps;
    o.inner = v.subgradient_iterations;
  } else {
    const FeasibilityVerdict v = check_feasible_pp(bundle, random_unit_lift(grid.N_T, seed), params);
    o.feasible = v.feasible;
    o.weights = v.weights;
    o.steps = v.pp_iterations;
    o.inner = v.pdg_iterations;
  }
  return o;
}

std::vector<int> pick(const std::vector<int>& samples, const std::vector<int>& positions) {
  std::vector<int> out;
  out.reserve(positions.size());
  for (int k : positions) out.push_back(samples[static_cast<std::size_t>(k)]);
  return out;
}

std::uint64_t beam_seed(const SolverParams& params, int start) {
  return splitmix64(params.seed + static_cast<std::uint64_t>(start));
}

/// Turns the last feasible trial angle into the next switch angle and
/// fills the beam. Falls back to a beam matched to the first sample when no
/// trial succeeded.
void finish(BeamDesign& d, const AoDGrid& grid, double phi_i, double phi_star, bool have_beam,
            const Eigen::VectorXcd& weights) {
  const int start = grid.lower_index(phi_i);
  d.beam.phi_lo = phi_i;
  if (!have_beam) {
    if (grid.gamma[start] > 1.0)
      throw SolverError("no beam can serve the sample at psi = " + std::to_string(grid.psi[start]) +
                        ": required gain exceeds 1");
    d.beam.weights = to_constant_modulus(grid.steering.col(start));
    d.phi_star = grid.psi[start];
    d.next_index = std::min(start + 1, grid.M - 1);
    d.beam.phi_hi = grid.psi[d.next_index];
    return;
  }
  d.beam.weights = weights;
  d.phi_star = phi_star;
  int k = grid.upper_index(phi_star);
  // A sample sitting exactly on phi_star was outside the checked half-open set.
  if (k > start + 1 && grid.psi[k - 1] == phi_star && !beam_serves(weights, grid, {k - 1})) k = k - 1;
  d.next_index = std::max(start + 1, std::min(k, grid.M - 1));
  d.beam.phi_hi = grid.psi[d.next_index];
}

}  // namespace

std::vector<int> thin_coverage(const AoDGrid& grid, const std::vector<int>& samples, double spacing) {
  const int J = static_cast<int>(samples.size());
  std::vector<int> out;
  if (spacing <= 0.0 || J <= 2) {
    out.resize(static_cast<std::size_t>(J));
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  const double step = spacing / grid.N_T;
  out.push_back(0);
  double last = std::sin(grid.psi[samples[0]]);
  for (int k = 1; k + 1 < J; ++k) {
    const double s = std::sin(grid.psi[samples[k]]);
    if (std::abs(s - last) >= step) {
      out.push_back(k);
      last = s;
    }
  }
  out.push_back(J - 1);
  return out;
}

std::string scheme_name(Scheme s) { return s == Scheme::sdr_dc_bis ? "sdr_dc_bis" : "pp_pdg_ms"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "sdr_dc_bis") return Scheme::sdr_dc_bis;
  if (name == "pp_pdg_ms") return Scheme::pp_pdg_ms;
  throw ConfigError("scheme", "unknown scheme '" + name + "' (expected sdr_dc_bis or pp_pdg_ms)");
}

double resolve_delta_phi(const AoDGrid& grid, int start, const SolverParams& params) {
  if (params.delta_phi > 0.0) return params.delta_phi;
  const int hi = std::min(start + params.delta_phi_samples, grid.M - 1);
  return grid.psi[hi] - grid.psi[start];
}

double resolve_eps_phi(const AoDGrid& grid, int start, const SolverParams& params) {
  if (params.eps_phi > 0.0) return params.eps_phi;
  const int hi = std::min(start + 1, grid.M - 1);
  return grid.psi[hi] - grid.psi[start];
}

BeamDesign bisection_search(const AoDGrid& grid, const ScenarioConfig& cfg, double phi_i, const SolverParams& params,
                            TrialSolver solver) {
  const auto t0 = std::chrono::steady_clock::now();
  const int start = grid.lower_index(phi_i);
  if (start >= grid.M - 1) throw DomainError("bisection_search: phi_i must lie before the last sample");
  const double cap = grid.psi[grid.M - 1];
  const double delta = resolve_delta_phi(grid, start, params);
  const double eps_phi = resolve_eps_phi(grid, start, params);
  const std::uint64_t seed = beam_seed(params, start);

  BeamDesign d;
  d.diag.first_sample = start;
  double lb = phi_i;
  double ub = kInf;
  bool have_beam = false;
  Eigen::VectorXcd best;

  auto record = [&](double phi, const Outcome& o, int n) {
    TrialRecord r;
    r.phi = phi;
    r.phi_lb = lb;
    r.phi_ub = ub;
    r.feasible = o.feasible;
    r.samples = n;
    d.trials.push_back(r);
    d.diag.solver_iterations += o.steps;
    d.diag.inner_iterations += o.inner;
    if (verbose())
      std::fprintf(stderr, "  trial %d phi=%.5f J=%d feasible=%d certified=%d inner=%ld\n",
                   static_cast<int>(d.trials.size()), phi, n, o.feasible ? 1 : 0, o.certified_infeasible ? 1 : 0,
                   static_cast<long>(o.inner));
  };
  auto coverage = [&](double phi) { return coverage_set(grid, phi_i, phi, cfg.sigma_psi, cfg.p_th); };
  auto full_trial = [&](double phi) {
    const std::vector<int> s = coverage(phi);
    Outcome o;
    if (s.empty()) {
      o.feasible = have_beam;
      o.weights = best;
    } else {
      o = run_trial(grid, s, params, solver, seed);
    }
    record(phi, o, static_cast<int>(s.size()));
    if (o.feasible) {
      lb = phi;
      best = o.weights;
      have_beam = true;
    } else {
      ub = phi;
    }
    return o.feasible;
  };

  // Bracket: grow the step until the trial is shown infeasible or the range ends.
  for (double step = delta; ub == kInf && static_cast<int>(d.trials.size()) < params.max_ts_iter; step *= 2.0) {
    const double phi = std::min(phi_i + step, cap);
    const std::vector<int> s = coverage(phi);
    if (solver == TrialSolver::sdr && phi < cap && !s.empty()) {
      const SdrLowerBound bound = sdr_lower_bound(SampleBundle::from_grid(grid, s, 0.0), params);
      Outcome o;
      o.certified_infeasible = bound.certified_infeasible;
      o.inner = bound.iterations;
      record(phi, o, static_cast<int>(s.size()));
      if (bound.certified_infeasible) ub = phi;
      continue;
    }
    if (full_trial(phi) && phi >= cap) break;
    if (phi >= cap) break;
  }

  if (!(have_beam && lb >= cap)) {
    if (ub == kInf) ub = cap;
    while (ub - lb > eps_phi && static_cast<int>(d.trials.size()) < params.max_ts_iter) full_trial(0.5 * (lb + ub));
  }

  finish(d, grid, phi_i, lb, have_beam, best);
  d.diag.ts_iterations = static_cast<int>(d.trials.size());
  d.diag.end_sample = d.next_index;
  d.diag.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return d;
}

BeamDesign mixed_search(const AoDGrid& grid, const ScenarioConfig& cfg, double phi_i, const SolverParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const int start = grid.lower_index(phi_i);
  if (start >= grid.M - 1) throw DomainError("mixed_search: phi_i must lie before the last sample");
  const double cap = grid.psi[grid.M - 1];
  const double delta_max = resolve_delta_phi(grid, start, params);
  const double eps_phi = resolve_eps_phi(grid, start, params);

  BeamDesign d;
  d.diag.first_sample = start;
  double lb = phi_i;
  double ub = kInf;
  double step = delta_max;
  double phi = std::min(phi_i + step, cap);
  double rho = params.rho_2_init;
  double w = params.w_max;
  double eps3 = params.eps_max;
  RealLift warm = random_unit_lift(grid.N_T, beam_seed(params, start));
  bool have_beam = false;
  Eigen::VectorXcd best;

  PpOptions opts;
  opts.w_mu = params.w_mu;
  opts.Q_cap = params.Q_cap;
  opts.pdg_max_iter = params.pdg_max_iter;

  int iter = 0;
  while (std::abs(step) > eps_phi && iter < params.max_ts_iter) {
    ++iter;
    const std::vector<int> samples = coverage_set(grid, phi_i, phi, cfg.sigma_psi, cfg.p_th);
    TrialRecord r;
    r.phi = phi;
    r.phi_lb = lb;
    r.phi_ub = ub;
    r.step = step;
    r.eps3 = eps3;
    r.w = w;
    r.rho_2 = rho;
    r.samples = static_cast<int>(samples.size());

    bool feasible = false;
    bool capped = false;
    bool violation = false;
    double norm_gap = 0.0;
    RealLift v_star = warm;
    RealLift v_hat = unit_modulus_projection(warm);
    if (samples.empty()) {
      feasible = true;
    } else {
      // Solve on a thinned working set; feasibility is always judged on every sample.
      const SampleBundle full = SampleBundle::from_grid(grid, samples, rho);
      std::vector<int> work = thin_coverage(grid, samples, params.working_set_spacing);
      opts.eps3 = eps3;
      opts.w = w;
      opts.accept = [&full](const RealLift& v) { return lift_feasible(full, unit_modulus_projection(v)); };
      RealLift v0 = warm.norm() > 0.0 ? warm : random_unit_lift(grid.N_T, beam_seed(params, start));
      while (true) {
        const SampleBundle bundle = SampleBundle::from_grid(grid, pick(samples, work), rho);
        const PpResult pp = pp_pdg(bundle, v0, opts);
        d.diag.solver_iterations += pp.q_star;
        d.diag.inner_iterations += pp.pdg_iterations;
        v_star = pp.v_star;
        v_hat = unit_modulus_projection(v_star);
        const Eigen::VectorXd slack = full.gains(v_hat) - full.gamma();
        feasible = slack.minCoeff() >= 0.0;
        capped = pp.capped;
        norm_gap = 1.0 - v_star.squaredNorm();
        violation = violation_check(bundle, v_star, v_hat);
        if (feasible || !lift_feasible(bundle, v_hat)) break;
        add_missed_samples(slack, work);
        v0 = v_star;
      }
      r.working_set = static_cast<int>(work.size());
    }
    r.feasible = feasible;
    r.capped = capped;
    r.violation = violation;
    d.trials.push_back(r);
    if (verbose())
      std::fprintf(stderr, "  trial %d phi=%.5f J=%d W=%d eps3=%.4g w=%.4g rho=%.3g feasible=%d capped=%d viol=%d\n",
                   iter, phi, r.samples, r.working_set, eps3, w, rho, feasible, capped, violation);

    const bool bisecting = std::abs(step) < delta_max;
    if (feasible) {
      lb = phi;
      best = restore(v_hat);
      have_beam = true;
      if (phi >= cap) break;
      if (bisecting) step = 0.5 * (ub - lb);
      else eps3 = params.eps_max;
      phi = std::min(phi + step, cap);
      w = params.w_max;
      rho = params.rho_2_init;
      warm = v_star;
    } else if (capped && w > params.w_min) {
      w = std::max(0.5 * w, params.w_min);
      warm = v_star;
    } else if ((norm_gap > params.eps_f && bisecting) || violation) {
      rho += params.delta_rho_2;
      eps3 = std::max(0.5 * eps3, params.eps_min);
      warm = v_star;
    } else if (eps3 > params.eps_min) {
      eps3 = std::max(0.5 * eps3, params.eps_min);
      warm = v_star;
    } else {
      ub = phi;
      step = 0.5 * (lb - ub);
      phi = phi + step;
      w = params.w_max;
      rho = params.rho_2_init;
      warm = have_beam ? lift(best) : v_star;
    }
  }

  finish(d, grid, phi_i, lb, have_beam, best);
  d.diag.ts_iterations = static_cast<int>(d.trials.size());
  d.diag.end_sample = d.next_index;
  d.diag.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return d;
}

Codebook sequential_design(const AoDGrid& grid, const ScenarioConfig& cfg, const SolverParams& params, Scheme scheme) {
  params.validate();
  Codebook cb;
  cb.scheme = scheme_name(scheme);
  double phi = grid.psi[0];
  while (phi < cfg.psi_max) {
    BeamDesign d = scheme == Scheme::sdr_dc_bis ? bisection_search(grid, cfg, phi, params, TrialSolver::sdr)
                                                : mixed_search(grid, cfg, phi, params);
    const std::vector<int> covered = coverage_set(grid, d.beam.phi_lo, d.beam.phi_hi, cfg.sigma_psi, cfg.p_th);
    if (!beam_serves(d.beam.weights, grid, covered))
      throw RecheckError("beam " + std::to_string(cb.N() + 1) + " misses the threshold on its coverage set");
    if (verbose())
      std::fprintf(stderr, "beam %d: [%.5f, %.5f) trials=%d %.2fs\n", cb.N() + 1, d.beam.phi_lo, d.beam.phi_hi,
                   d.diag.ts_iterations, d.diag.seconds);
    phi = d.beam.phi_hi;
    cb.beams.push_back(std::move(d.beam));
    cb.diagnostics.push_back(d.diag);
  }
  return cb;
}

}  // namespace beamforge
