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

// Lifted (semidefinite) feasibility solver with a rank-one DC penalty.
//
// The beam f is replaced by F = f f^H on the set
//   F1 = { F Hermitian PSD, diag(F) = 1/N },
// and coverage is feasible when D1(F) = max_m -(a_m^H F a_m)/gamma_m <= -1.
// Rank one is encouraged by the penalty rho_1 (Tr F - |F|_2), whose concave
// part is linearized at every outer step.

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "beamforge/minmax_core.hpp"
#include "beamforge/scenario.hpp"

namespace beamforge {

struct F1Projection {
  Eigen::MatrixXcd F;
  int iterations = 0;
  bool converged = false;
};

/// Dykstra alternating projection onto F1 (PSD cone and diag = 1/N).
F1Projection project_F1(const Eigen::MatrixXcd& H, double tol, int max_iter);

/// a_m^H F a_m for every sample in the bundle.
Eigen::VectorXd lifted_gains(const Eigen::MatrixXcd& F, const SampleBundle& bundle);

double d1_value(const Eigen::MatrixXcd& F, const SampleBundle& bundle);

/// Largest eigenpair of a Hermitian matrix.
struct TopEigen {
  double value = 0.0;
  Eigen::VectorXcd vector;
};
TopEigen top_eigen(const Eigen::MatrixXcd& F);

/// D(F) = D1(F) + rho_1 (Tr F - |F|_2).
double dc_objective(const Eigen::MatrixXcd& F, const SampleBundle& bundle, double rho_1);

struct SubgradientResult {
  Eigen::MatrixXcd F;
  double objective = 0.0;          // D1(F) - Re Tr(Xi F) at F
  long iterations = 0;
  Eigen::VectorXd active_weights;  // how often each sample attained the max
};

/// Projected subgradient on D1(F) - Re Tr(Xi F) over F1 from `start`,
/// returning the best iterate. When `target` is finite, Polyak steps toward it
/// are used and the run stops once the objective reaches it.
SubgradientResult dc_subproblem_solve(const Eigen::MatrixXcd& start, const Eigen::MatrixXcd& Xi,
                                      const SampleBundle& bundle, const SolverParams& params,
                                      double target = -std::numeric_limits<double>::infinity());

/// Rigorous lower bound on min over F1 of D1 from a weight vector z on the
/// samples, using the dual certificate mean(y) + lambda_min(C(z) - Diag(y))
/// with C(z) = -sum_m z_m a_m a_m^H / gamma_m and y tuned at F.
double sdr_dual_bound(const SampleBundle& bundle, const Eigen::VectorXd& z, const Eigen::MatrixXcd& F);

struct SdrLowerBound {
  Eigen::MatrixXcd F0;
  double d1_lb = 0.0;        // D1 at the best first-order iterate (upper bound on the SDR minimum)
  double certificate = 0.0;  // rigorous lower bound on the SDR minimum
  double bound_slack = 0.0;  // d1_lb - certificate
  bool certified_infeasible = false;
  long iterations = 0;
};

SdrLowerBound sdr_lower_bound(const SampleBundle& bundle, const SolverParams& params);

struct DcResult {
  Eigen::VectorXcd weights;
  Eigen::MatrixXcd F;
  bool converged = false;
  bool accepted = false;      // stopped because the extracted beam already served every sample
  int q = 0;
  double rho_1 = 0.0;
  long subgradient_iterations = 0;
  std::vector<double> D_history;
};

/// DC iterations from F0 (the relaxed minimizer); extracts the beam at the end.
/// With `early_accept`, stops as soon as the extracted beam passes the exact recheck.
DcResult dc_iterate(const SampleBundle& bundle, const SolverParams& params, const Eigen::MatrixXcd& F0,
                    bool early_accept = true);

/// Top eigenvector rescaled to constant modulus 1/sqrt(N).
Eigen::VectorXcd extract_beamformer(const Eigen::MatrixXcd& F);

struct SdrVerdict {
  bool feasible = false;
  bool certified_infeasible = false;
  Eigen::VectorXcd weights;
  long dc_steps = 0;
  long subgradient_iterations = 0;
};

/// Lower bound, DC iterations, extraction and exact recheck for one coverage.
SdrVerdict check_feasible_sdr(const SampleBundle& bundle, const SolverParams& params);

}  // namespace beamforge
