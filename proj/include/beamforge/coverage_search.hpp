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

#include <string>
#include <vector>

#include "beamforge/channel.hpp"
#include "beamforge/minmax_core.hpp"
#include "beamforge/scenario.hpp"

namespace beamforge {

enum class Scheme { sdr_dc_bis, pp_pdg_ms };

std::string scheme_name(Scheme s);
/// Throws ConfigError (key "scheme") for unknown names.
Scheme parse_scheme(const std::string& name);

/// Which fixed-coverage solver a bisection search calls.
enum class TrialSolver { sdr, pp };

/// The designed beam failed the exact post-hoc check.
class RecheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialRecord {
  double phi = 0.0;
  double phi_lb = 0.0;
  double phi_ub = 0.0;  // +inf while no upper bound is known
  double step = 0.0;
  bool feasible = false;
  bool capped = false;
  bool violation = false;
  double eps3 = 0.0;
  double w = 0.0;
  double rho_2 = 0.0;
  int samples = 0;
  int working_set = 0;  // samples handed to the solver (mixed search only)
};

struct BeamDesign {
  Beam beam;
  double phi_star = 0.0;  // last feasible trial angle
  int next_index = 0;     // sample index of phi_hi
  BeamDiagnostics diag;
  std::vector<TrialRecord> trials;
};

/// Angle step defaults resolved at the current beam start.
double resolve_delta_phi(const AoDGrid& grid, int start, const SolverParams& params);
double resolve_eps_phi(const AoDGrid& grid, int start, const SolverParams& params);

/// Positions into `samples` about spacing / N_T apart in sin(psi), always
/// keeping both ends. A spacing of zero keeps every position.
std::vector<int> thin_coverage(const AoDGrid& grid, const std::vector<int>& samples, double spacing);

/// Bisection on the switch angle starting from phi_i (a grid sample).
BeamDesign bisection_search(const AoDGrid& grid, const ScenarioConfig& cfg, double phi_i, const SolverParams& params,
                            TrialSolver solver = TrialSolver::sdr);

/// Monotonic steps followed by bisection, with the adaptive penalty /
/// tolerance / weight schedule around the PP-PDG solver.
BeamDesign mixed_search(const AoDGrid& grid, const ScenarioConfig& cfg, double phi_i, const SolverParams& params);

/// Designs beams one after another from psi_min until the range is covered.
Codebook sequential_design(const AoDGrid& grid, const ScenarioConfig& cfg, const SolverParams& params, Scheme scheme);

}  // namespace beamforge
