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

#include "beamforge/sdr_dc.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "beamforge/channel.hpp"

namespace beamforge {

namespace {

constexpr double kStepScale = 0.2;
constexpr double kFeasibleMargin = 0.05;
constexpr int kMaxRhoDoublings = 3;
// Step budget of the relaxed bound solve, which has no DC loop around it.
constexpr int kBoundSteps = 300;

Eigen::MatrixXcd psd_part(const Eigen::MatrixXcd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& H) { return 0.5 * (H + H.adjoint()); }

}  // namespace

F1Projection project_F1(const Eigen::MatrixXcd& H_in, double tol, int max_iter) {
  const Eigen::Index N = H_in.rows();
  const double diag = 1.0 / static_cast<double>(N);
  F1Projection out;
  Eigen::MatrixXcd X = hermitize(H_in);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(N, N);
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(N, N);
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::MatrixXcd Y = psd_part(X + P);
    P = X + P - Y;
    Eigen::MatrixXcd Xn = Y + Q;
    Xn.diagonal().setConstant(diag);
    Q = Y + Q - Xn;
    const double change = (Xn - X).norm();
    X = std::move(Xn);
    out.iterations = it;
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  out.F = hermitize(X);
  return out;
}

Eigen::VectorXd lifted_gains(const Eigen::MatrixXcd& F, const SampleBundle& bundle) {
  const Eigen::MatrixXcd& S = bundle.steering();
  const Eigen::MatrixXcd FS = F * S;
  return (S.conjugate().cwiseProduct(FS)).colwise().sum().real().transpose();
}

double d1_value(const Eigen::MatrixXcd& F, const SampleBundle& bundle) {
  return (-lifted_gains(F, bundle).cwiseQuotient(bundle.gamma())).maxCoeff();
}

TopEigen top_eigen(const Eigen::MatrixXcd& F) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(F));
  const Eigen::Index n = F.rows();
  return {es.eigenvalues()[n - 1], es.eigenvectors().col(n - 1)};
}

double dc_objective(const Eigen::MatrixXcd& F, const SampleBundle& bundle, double rho_1) {
  return d1_value(F, bundle) + rho_1 * (F.trace().real() - top_eigen(F).value);
}

SubgradientResult dc_subproblem_solve(const Eigen::MatrixXcd& start, const Eigen::MatrixXcd& Xi,
                                      const SampleBundle& bundle, const SolverParams& params, double target) {
  const Eigen::Index J = bundle.J();
  const bool polyak = std::isfinite(target);
  auto objective = [&](const Eigen::MatrixXcd& F, Eigen::Index& arg) {
    const Eigen::VectorXd vals = -lifted_gains(F, bundle).cwiseQuotient(bundle.gamma());
    const double d1 = vals.maxCoeff(&arg);
    return d1 - (Xi.cwiseProduct(F.transpose())).sum().real();
  };

  SubgradientResult res;
  res.active_weights = Eigen::VectorXd::Zero(J);
  Eigen::MatrixXcd F = start;
  Eigen::Index arg = 0;
  double obj = objective(F, arg);
  res.F = F;
  res.objective = obj;
  long counted = 0;
  for (int k = 1; k <= params.subgrad_max_iter; ++k) {
    if (polyak && res.objective <= target) break;
    res.active_weights[arg] += 1.0;
    ++counted;
    const Eigen::VectorXcd a = bundle.steering().col(arg);
    const Eigen::MatrixXcd g = -(a * a.adjoint()) / bundle.gamma()[arg] - Xi;
    const double gn = g.norm();
    if (gn == 0.0) break;
    const double step = polyak ? (obj - target) / (gn * gn) : kStepScale / (std::sqrt(static_cast<double>(k)) * gn);
    F = project_F1(F - step * g, params.dykstra_tol, params.dykstra_max_iter).F;
    obj = objective(F, arg);
    res.iterations = k;
    if (obj < res.objective) {
      res.objective = obj;
      res.F = F;
    }
  }
  if (counted > 0) res.active_weights /= static_cast<double>(counted);
  else res.active_weights[arg] = 1.0;
  return res;
}

double sdr_dual_bound(const SampleBundle& bundle, const Eigen::VectorXd& z, const Eigen::MatrixXcd& F) {
  const Eigen::MatrixXcd& S = bundle.steering();
  const Eigen::VectorXd w = z.cwiseQuotient(bundle.gamma());
  const Eigen::MatrixXcd C = -(S * w.asDiagonal() * S.adjoint());
  const Eigen::Index N = F.rows();
  const Eigen::VectorXd y = static_cast<double>(N) * (C * F).diagonal().real();
  Eigen::MatrixXcd K = C;
  K.diagonal() -= y.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(K), Eigen::EigenvaluesOnly);
  return y.mean() + es.eigenvalues()[0];
}

SdrLowerBound sdr_lower_bound(const SampleBundle& bundle, const SolverParams& params) {
  const Eigen::Index N = bundle.N();
  const Eigen::Index J = bundle.J();
  SdrLowerBound out;
  const Eigen::MatrixXcd start = Eigen::MatrixXcd::Identity(N, N) / static_cast<double>(N);
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(N, N);
  SolverParams bound_params = params;
  bound_params.subgrad_max_iter = std::max(params.subgrad_max_iter, kBoundSteps);
  const SubgradientResult sg = dc_subproblem_solve(start, zero, bundle, bound_params, -1.0 - kFeasibleMargin);
  out.F0 = sg.F;
  out.d1_lb = sg.objective;
  out.iterations = sg.iterations;

  // Several cheap multiplier guesses; any one of them gives a valid bound.
  Eigen::Index worst = 0;
  (-lifted_gains(sg.F, bundle).cwiseQuotient(bundle.gamma())).maxCoeff(&worst);
  std::vector<Eigen::VectorXd> guesses;
  guesses.push_back(sg.active_weights);
  guesses.push_back(Eigen::VectorXd::Unit(J, worst));
  if (J > 1) {
    Eigen::VectorXd ends = Eigen::VectorXd::Zero(J);
    ends[0] = 0.5;
    ends[J - 1] = 0.5;
    guesses.push_back(ends);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& z : guesses) best = std::max(best, sdr_dual_bound(bundle, z, sg.F));
  out.certificate = best;
  out.bound_slack = out.d1_lb - out.certificate;
  out.certified_infeasible = out.certificate > -1.0;
  return out;
}

Eigen::VectorXcd extract_beamformer(const Eigen::MatrixXcd& F) { return to_constant_modulus(top_eigen(F).vector); }

DcResult dc_iterate(const SampleBundle& bundle, const SolverParams& params, const Eigen::MatrixXcd& F0,
                    bool early_accept) {
  DcResult res;
  double rho_1 = params.rho_1;
  Eigen::MatrixXcd F = F0;
  auto serves = [&](const Eigen::VectorXcd& w) {
    const Eigen::VectorXd g = (bundle.steering().adjoint() * w).cwiseAbs2();
    return (g.array() >= bundle.gamma().array()).all();
  };

  for (int attempt = 0; attempt <= kMaxRhoDoublings; ++attempt) {
    res.D_history.clear();
    res.converged = false;
    double D = dc_objective(F, bundle, rho_1);
    res.D_history.push_back(D);
    for (int q = 1; q <= params.dc_max_iter; ++q) {
      const TopEigen top = top_eigen(F);
      if (early_accept) {
        const Eigen::VectorXcd w = to_constant_modulus(top.vector);
        if (serves(w)) {
          res.accepted = true;
          res.weights = w;
          res.F = F;
          res.rho_1 = rho_1;
          return res;
        }
      }
      const Eigen::MatrixXcd Xi = rho_1 * (top.vector * top.vector.adjoint());
      const SubgradientResult sub = dc_subproblem_solve(F, Xi, bundle, params);
      res.subgradient_iterations += sub.iterations;
      const double Dn = dc_objective(sub.F, bundle, rho_1);
      const double gap = sub.F.trace().real() - top_eigen(sub.F).value;
      res.D_history.push_back(Dn);
      ++res.q;
      const bool stalled = D - Dn <= params.eps_1;
      F = sub.F;
      D = Dn;
      if (stalled && gap <= params.eps_2) {
        res.converged = true;
        break;
      }
    }
    const double gap = F.trace().real() - top_eigen(F).value;
    if (res.converged || gap <= params.eps_2) break;
    rho_1 *= 2.0;
  }
  res.F = F;
  res.rho_1 = rho_1;
  res.weights = extract_beamformer(F);
  return res;
}

SdrVerdict check_feasible_sdr(const SampleBundle& bundle, const SolverParams& params) {
  SdrVerdict v;
  const SdrLowerBound lb = sdr_lower_bound(bundle, params);
  v.subgradient_iterations += lb.iterations;
  if (lb.certified_infeasible) {
    v.certified_infeasible = true;
    v.weights = extract_beamformer(lb.F0);
    return v;
  }
  const DcResult dc = dc_iterate(bundle, params, lb.F0, true);
  v.dc_steps = dc.q;
  v.subgradient_iterations += dc.subgradient_iterations;
  v.weights = dc.weights;
  const Eigen::VectorXd g = (bundle.steering().adjoint() * v.weights).cwiseAbs2();
  v.feasible = (g.array() >= bundle.gamma().array()).all();
  return v;
}

}  // namespace beamforge
