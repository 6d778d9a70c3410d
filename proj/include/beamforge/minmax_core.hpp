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

// Penalty min-max feasibility solver: proximal-point outer loop with an
// excessive-gap primal-dual inner loop.
//
// A complex beam f (length N) is handled through its real lift
// v = [Re f; Im f] (length 2N). Sample j contributes the quadratic form
// v^T A_j v = |a_j^H f|^2 + rho_2 |v|^2 and the residual
// u_j(v) = gamma_j - v^T A_j v; U(v) = max_j u_j(v).

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "beamforge/channel.hpp"

namespace beamforge {

using RealLift = Eigen::VectorXd;

RealLift lift(const Eigen::VectorXcd& f);
Eigen::VectorXcd restore(const RealLift& v);

/// Random constant-modulus point (unit norm, every pair on its disc boundary), reproducible from the seed.
RealLift random_unit_lift(int N, std::uint64_t seed);

class SampleBundle {
 public:
  SampleBundle(Eigen::MatrixXcd steering, Eigen::VectorXd gamma, double rho_2 = 0.0);
  static SampleBundle from_grid(const AoDGrid& grid, const std::vector<int>& samples, double rho_2 = 0.0);
  /// The bundle restricted to the given columns, in order.
  SampleBundle subset(const std::vector<int>& cols) const;

  int J() const { return static_cast<int>(gamma_.size()); }
  int N() const { return static_cast<int>(steering_.rows()); }
  double rho_2() const { return rho_2_; }
  void set_rho_2(double rho) { rho_2_ = rho; }
  /// Weak-convexity modulus 2(1 + rho_2).
  double L() const { return 2.0 * (1.0 + rho_2_); }

  const Eigen::MatrixXcd& steering() const { return steering_; }
  const Eigen::VectorXd& gamma() const { return gamma_; }

  /// |a_j^H f|^2 for every j.
  Eigen::VectorXd gains(const RealLift& v) const;
  /// v^T A_j v for every j.
  Eigen::VectorXd quad_forms(const RealLift& v) const;

 private:
  Eigen::MatrixXcd steering_;  // N x J
  Eigen::VectorXd gamma_;
  double rho_2_;
};

double penalty_objective(const SampleBundle& bundle, const RealLift& v);

/// First-order model of every u_j at an anchor: u_j(anchor) + g_j^T (v - anchor)
/// = d_j + g_j^T v, with the g_j stacked as the columns of G (2N x J).
struct Linearization {
  RealLift anchor;
  Eigen::MatrixXd G;
  Eigen::VectorXd d;
};

Linearization linearize(const SampleBundle& bundle, const RealLift& anchor);

/// Largest singular value of G by power iteration on G G^T.
double spectral_norm(const Eigen::MatrixXd& G, int max_iter = 1000, double tol = 1e-13);

/// Surrogate max_j (d_j + g_j^T v) + sigma/2 |v - anchor|^2.
double surrogate_value(const Linearization& lin, const RealLift& v, double sigma);
double surrogate_value(const SampleBundle& bundle, const RealLift& v, const RealLift& anchor, double sigma);

/// Returns (c - nu)^+ / mass where nu makes the result sum to one; the
/// threshold comes from the sorted-prefix rule (stable descending order).
Eigen::VectorXd simplex_threshold(const Eigen::VectorXd& c, double mass);

/// argmin over per-antenna discs |v_n, v_{n+N}| <= 1/sqrt(N) of
/// z^T(d + G^T v) + sigma/2 |v - anchor|^2.
RealLift solve_sub1(const Linearization& lin, const Eigen::VectorXd& z, double sigma);
/// Same, given the precomputed product G z.
RealLift solve_sub1_from_Gz(const Linearization& lin, const Eigen::VectorXd& Gz, double sigma);

/// argmax over the simplex of z^T(d + G^T v) - mu_z/2 |z - z0|^2.
Eigen::VectorXd solve_sub2(const Linearization& lin, const RealLift& v, double mu_z, const Eigen::VectorXd& z0);

/// Gradient-mapping step of the smoothed dual from z with step 1/L_q;
/// v_of_z is solve_sub1(z).
Eigen::VectorXd solve_sub3(const Linearization& lin, const Eigen::VectorXd& z, const RealLift& v_of_z,
                           double L_q);

struct PdgResult {
  RealLift v;
  Eigen::VectorXd z;
  long iterations = 0;
  bool capped = false;
  double gap = 0.0;
  std::vector<double> mu_history;   // mu_z before each update
  std::vector<double> gap_history;  // gap checked at the top of each iteration
};

/// Minimizes the surrogate to within eps_tilde_2 (certified by the
/// primal-dual gap). Records histories only when `record` is set.
PdgResult pdg_solve(const Linearization& lin, double sigma, double eps_tilde_2, long max_iter,
                    bool record = false);

/// sigma and mu of the proximal step for the given weight and modulus.
inline double prox_mu(double w_mu, double L) { return w_mu / L; }
inline double prox_sigma(double w_mu, double L) { return (1.0 / w_mu - 1.0) * L; }
double pdg_tolerance(double w, double w_mu, double eps3, double L);
double pp_stop_threshold(double w, double w_mu, double eps3, double L);

struct PpOptions {
  double eps3 = 0.05;
  double w = 0.5;
  double w_mu = 0.5;
  int Q_cap = 200;
  long pdg_max_iter = 200000;
  /// Checked on every anchor; returning true stops the loop early.
  std::function<bool(const RealLift&)> accept;
  bool record = false;
};

struct PpResult {
  RealLift v_star;
  int q_star = 0;
  bool capped = false;       // q reached Q_cap or a PDG call hit its cap
  bool accepted = false;     // stopped by the accept callback
  long pdg_iterations = 0;
  double stop_threshold = 0.0;
  std::vector<double> U_history;      // U(v_q) for every anchor
  std::vector<double> pdg_gaps;       // terminal gap of each PDG call
  std::vector<double> pdg_tolerances; // eps_tilde_2 used for each call
};

PpResult pp_pdg(const SampleBundle& bundle, const RealLift& v0, const PpOptions& opts);

/// Rescales every antenna pair to modulus 1/sqrt(N), keeping its phase.
RealLift unit_modulus_projection(const RealLift& v);

/// True when the relaxed point and its projection disagree in sign:
/// (U(v_star) + rho_2 |v_star|) (U(v_proj) + rho_2) <= 0.
bool violation_check(const SampleBundle& bundle, const RealLift& v_star, const RealLift& v_projected);

/// Every gain meets its threshold exactly.
bool lift_feasible(const SampleBundle& bundle, const RealLift& v);

struct FeasibilityVerdict {
  bool feasible = false;
  Eigen::VectorXcd weights;  // constant-modulus beam (feasible or best effort)
  RealLift warm;             // relaxed point for warm starts
  int trials = 0;
  long pp_iterations = 0;
  long pdg_iterations = 0;
};

/// Runs the adaptive penalty / tolerance / weight schedule at a fixed coverage
/// until the projected beam is feasible or infeasibility is declared at
/// eps_min.
FeasibilityVerdict check_feasible_pp(const SampleBundle& bundle, const RealLift& v0, const SolverParams& params);

/// As above, solving on the columns `work` of `bundle` only. A beam that serves
/// the working set but misses other columns adds the worst column of each missed
/// run and the check repeats from its last point. Feasibility is judged on every
/// column; infeasibility of a working set implies infeasibility of the bundle.
FeasibilityVerdict check_feasible_pp(const SampleBundle& bundle, const RealLift& v0, const SolverParams& params,
                                     std::vector<int> work);

/// Adds to `work` the most negative position of every run of negative `slack`,
/// keeping `work` sorted and free of duplicates.
void add_missed_samples(const Eigen::VectorXd& slack, std::vector<int>& work);

}  // namespace beamforge
