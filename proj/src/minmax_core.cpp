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

#include "beamforge/minmax_core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "beamforge/error.hpp"
#include "beamforge/rng.hpp"

namespace beamforge {

RealLift lift(const Eigen::VectorXcd& f) {
  const Eigen::Index n = f.size();
  RealLift v(2 * n);
  v.head(n) = f.real();
  v.tail(n) = f.imag();
  return v;
}

Eigen::VectorXcd restore(const RealLift& v) {
  const Eigen::Index n = v.size() / 2;
  Eigen::VectorXcd f(n);
  f.real() = v.head(n);
  f.imag() = v.tail(n);
  return f;
}

RealLift random_unit_lift(int N, std::uint64_t seed) {
  Eigen::VectorXcd f(N);
  const double r = 1.0 / std::sqrt(static_cast<double>(N));
  for (int n = 0; n < N; ++n) f[n] = std::polar(r, 2.0 * kPi * counter_uniform(seed, static_cast<std::uint64_t>(n)));
  return lift(f);
}

SampleBundle::SampleBundle(Eigen::MatrixXcd steering, Eigen::VectorXd gamma, double rho_2)
    : steering_(std::move(steering)), gamma_(std::move(gamma)), rho_2_(rho_2) {
  if (steering_.cols() != gamma_.size()) throw std::invalid_argument("SampleBundle: size mismatch");
  if (gamma_.size() == 0) throw std::invalid_argument("SampleBundle: empty sample set");
}

SampleBundle SampleBundle::from_grid(const AoDGrid& grid, const std::vector<int>& samples, double rho_2) {
  Eigen::MatrixXcd S(grid.N_T, static_cast<Eigen::Index>(samples.size()));
  Eigen::VectorXd g(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    S.col(static_cast<Eigen::Index>(j)) = grid.steering.col(samples[j]);
    g[static_cast<Eigen::Index>(j)] = grid.gamma[samples[j]];
  }
  return SampleBundle(std::move(S), std::move(g), rho_2);
}

SampleBundle SampleBundle::subset(const std::vector<int>& cols) const {
  Eigen::MatrixXcd S(N(), static_cast<Eigen::Index>(cols.size()));
  Eigen::VectorXd g(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    S.col(static_cast<Eigen::Index>(j)) = steering_.col(cols[j]);
    g[static_cast<Eigen::Index>(j)] = gamma_[cols[j]];
  }
  return SampleBundle(std::move(S), std::move(g), rho_2_);
}

Eigen::VectorXd SampleBundle::gains(const RealLift& v) const {
  const Eigen::VectorXcd c = steering_.adjoint() * restore(v);
  return c.cwiseAbs2();
}

Eigen::VectorXd SampleBundle::quad_forms(const RealLift& v) const {
  return gains(v).array() + rho_2_ * v.squaredNorm();
}

double penalty_objective(const SampleBundle& bundle, const RealLift& v) {
  return (bundle.gamma() - bundle.quad_forms(v)).maxCoeff();
}

Linearization linearize(const SampleBundle& bundle, const RealLift& anchor) {
  Linearization lin;
  lin.anchor = anchor;
  const Eigen::Index N = bundle.N();
  const Eigen::Index J = bundle.J();
  const Eigen::VectorXcd x = restore(anchor);
  const Eigen::VectorXcd c = bundle.steering().adjoint() * x;
  // A_j v lifts to a_j (a_j^H x); the gradient of u_j is -2 A_j v.
  Eigen::MatrixXcd Ax = bundle.steering() * c.asDiagonal();
  lin.G.resize(2 * N, J);
  lin.G.topRows(N) = -2.0 * Ax.real();
  lin.G.bottomRows(N) = -2.0 * Ax.imag();
  lin.G.colwise() -= 2.0 * bundle.rho_2() * anchor;
  const double sq = anchor.squaredNorm();
  lin.d = bundle.gamma().array() + c.cwiseAbs2().array() + bundle.rho_2() * sq;
  return lin;
}

double spectral_norm(const Eigen::MatrixXd& G, int max_iter, double tol) {
  if (G.size() == 0) return 0.0;
  const Eigen::MatrixXd K = G * G.transpose();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(K.rows());
  // A deterministic, non-degenerate start.
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += 1e-3 * static_cast<double>(i % 7);
  x.normalize();
  double lam = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd y = K * x;
    const double next = y.norm();
    if (next == 0.0) return 0.0;
    x = y / next;
    if (std::abs(next - lam) <= tol * next) {
      lam = next;
      break;
    }
    lam = next;
  }
  return std::sqrt(lam);
}

double surrogate_value(const Linearization& lin, const RealLift& v, double sigma) {
  const double lin_max = (lin.d + lin.G.transpose() * v).maxCoeff();
  return lin_max + 0.5 * sigma * (v - lin.anchor).squaredNorm();
}

double surrogate_value(const SampleBundle& bundle, const RealLift& v, const RealLift& anchor, double sigma) {
  return surrogate_value(linearize(bundle, anchor), v, sigma);
}

Eigen::VectorXd simplex_threshold(const Eigen::VectorXd& c, double mass) {
  // Michelot's fixed-point pass: drop entries at or below the running
  // threshold until the support stops shrinking. No sorting needed.
  std::vector<double> active(c.data(), c.data() + c.size());
  double nu = (c.sum() - mass) / static_cast<double>(c.size());
  while (true) {
    std::size_t kept = 0;
    double sum = 0.0;
    for (double x : active)
      if (x > nu) {
        active[kept++] = x;
        sum += x;
      }
    if (kept == active.size()) break;
    active.resize(kept);
    nu = (sum - mass) / static_cast<double>(kept);
  }
  return ((c.array() - nu).max(0.0) / mass).matrix();
}

namespace {

// G z for a simplex point z, touching only its support.
Eigen::VectorXd sparse_Gz(const Linearization& lin, const Eigen::VectorXd& z) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(lin.G.rows());
  for (Eigen::Index j = 0; j < z.size(); ++j)
    if (z[j] != 0.0) out.noalias() += z[j] * lin.G.col(j);
  return out;
}

}  // namespace

RealLift solve_sub1_from_Gz(const Linearization& lin, const Eigen::VectorXd& Gz, double sigma) {
  const Eigen::Index N = Gz.size() / 2;
  const double sqrtN = std::sqrt(static_cast<double>(N));
  const Eigen::VectorXd b = Gz - sigma * lin.anchor;
  RealLift v(2 * N);
  for (Eigen::Index n = 0; n < N; ++n) {
    const double nb = std::hypot(b[n], b[n + N]);
    const double lambda = std::max(0.0, 0.5 * (sqrtN * nb - sigma));
    v[n] = -b[n] / (sigma + 2.0 * lambda);
    v[n + N] = -b[n + N] / (sigma + 2.0 * lambda);
  }
  return v;
}

RealLift solve_sub1(const Linearization& lin, const Eigen::VectorXd& z, double sigma) {
  return solve_sub1_from_Gz(lin, sparse_Gz(lin, z), sigma);
}

Eigen::VectorXd solve_sub2(const Linearization& lin, const RealLift& v, double mu_z, const Eigen::VectorXd& z0) {
  const Eigen::VectorXd c = lin.d + lin.G.transpose() * v + mu_z * z0;
  return simplex_threshold(c, mu_z);
}

Eigen::VectorXd solve_sub3(const Linearization& lin, const Eigen::VectorXd& z, const RealLift& v_of_z,
                           double L_q) {
  const Eigen::VectorXd w = lin.d + lin.G.transpose() * v_of_z + L_q * z;
  return simplex_threshold(w, L_q);
}

PdgResult pdg_solve(const Linearization& lin, double sigma, double eps_tilde_2, long max_iter, bool record) {
  const Eigen::Index J = lin.d.size();
  const Eigen::VectorXd z0 = Eigen::VectorXd::Constant(J, 1.0 / static_cast<double>(J));
  const double normG = spectral_norm(lin.G);
  // Guard the degenerate G = 0 case (then the surrogate is separable and one step is exact).
  const double L_q = std::max(normG * normG / sigma, 1e-300);

  auto primal = [&](const RealLift& v, const Eigen::VectorXd& Gtv) {
    return (lin.d + Gtv).maxCoeff() + 0.5 * sigma * (v - lin.anchor).squaredNorm();
  };

  PdgResult res;
  RealLift fbar = solve_sub1(lin, z0, sigma);
  Eigen::VectorXd Gt_fbar = lin.G.transpose() * fbar;
  Eigen::VectorXd zbar = simplex_threshold(lin.d + Gt_fbar + L_q * z0, L_q);
  double mu_z = 2.0 * L_q;

  long k = 0;
  while (true) {
    const RealLift vz = solve_sub1(lin, zbar, sigma);
    const Eigen::VectorXd Gt_vz = lin.G.transpose() * vz;
    const double dual = zbar.dot(lin.d + Gt_vz) + 0.5 * sigma * (vz - lin.anchor).squaredNorm();
    res.gap = primal(fbar, Gt_fbar) - dual;
    if (record) res.gap_history.push_back(res.gap);
    if (res.gap <= eps_tilde_2) break;
    if (k >= max_iter) {
      res.capped = true;
      break;
    }
    const double theta = 2.0 / (static_cast<double>(k) + 3.0);
    const Eigen::VectorXd zs = simplex_threshold(lin.d + Gt_fbar + mu_z * z0, mu_z);
    const Eigen::VectorXd zhat = (1.0 - theta) * zbar + theta * zs;
    if (record) res.mu_history.push_back(mu_z);
    mu_z *= (1.0 - theta);
    const RealLift fz = solve_sub1(lin, zhat, sigma);
    const Eigen::VectorXd Gt_fz = lin.G.transpose() * fz;
    fbar = (1.0 - theta) * fbar + theta * fz;
    Gt_fbar = (1.0 - theta) * Gt_fbar + theta * Gt_fz;
    zbar = simplex_threshold(lin.d + Gt_fz + L_q * zhat, L_q);
    ++k;
  }
  res.v = std::move(fbar);
  res.z = std::move(zbar);
  res.iterations = k;
  return res;
}

double pdg_tolerance(double w, double w_mu, double eps3, double L) {
  return w * w_mu * (1.0 - w_mu) * eps3 * eps3 / (8.0 * L);
}

double pp_stop_threshold(double w, double w_mu, double eps3, double L) {
  const double mu = prox_mu(w_mu, L);
  const double sigma = prox_sigma(w_mu, L);
  return eps3 * eps3 * mu * mu * sigma / 8.0 - pdg_tolerance(w, w_mu, eps3, L);
}

PpResult pp_pdg(const SampleBundle& bundle, const RealLift& v0, const PpOptions& opts) {
  const double L = bundle.L();
  const double sigma = prox_sigma(opts.w_mu, L);
  const double eps_t2 = pdg_tolerance(opts.w, opts.w_mu, opts.eps3, L);
  PpResult res;
  res.stop_threshold = pp_stop_threshold(opts.w, opts.w_mu, opts.eps3, L);

  RealLift v = v0;
  double Uv = penalty_objective(bundle, v);
  res.U_history.push_back(Uv);
  int q = 0;
  while (true) {
    if (opts.accept && opts.accept(v)) {
      res.accepted = true;
      break;
    }
    if (q >= opts.Q_cap) {
      res.capped = true;
      break;
    }
    const Linearization lin = linearize(bundle, v);
    PdgResult pdg = pdg_solve(lin, sigma, eps_t2, opts.pdg_max_iter, false);
    res.pdg_iterations += pdg.iterations;
    res.pdg_gaps.push_back(pdg.gap);
    res.pdg_tolerances.push_back(eps_t2);
    if (pdg.capped) {
      res.capped = true;
      break;
    }
    const double model = surrogate_value(lin, pdg.v, sigma);
    if (Uv - model <= res.stop_threshold) break;
    v = std::move(pdg.v);
    Uv = penalty_objective(bundle, v);
    res.U_history.push_back(Uv);
    ++q;
  }
  res.v_star = std::move(v);
  res.q_star = q;
  return res;
}

RealLift unit_modulus_projection(const RealLift& v) {
  return lift(to_constant_modulus(restore(v)));
}

bool violation_check(const SampleBundle& bundle, const RealLift& v_star, const RealLift& v_projected) {
  const double rho = bundle.rho_2();
  const double relaxed = penalty_objective(bundle, v_star) + rho * v_star.norm();
  const double projected = penalty_objective(bundle, v_projected) + rho;
  return relaxed * projected <= 0.0;
}

bool lift_feasible(const SampleBundle& bundle, const RealLift& v) {
  return (bundle.gains(v).array() >= bundle.gamma().array()).all();
}

FeasibilityVerdict check_feasible_pp(const SampleBundle& bundle_in, const RealLift& v0, const SolverParams& params) {
  SampleBundle bundle = bundle_in;
  FeasibilityVerdict out;
  double rho = params.rho_2_init;
  double w = params.w_max;
  double eps3 = params.eps_max;
  RealLift warm = v0;

  PpOptions opts;
  opts.w_mu = params.w_mu;
  opts.Q_cap = params.Q_cap;
  opts.pdg_max_iter = params.pdg_max_iter;
  opts.accept = [&](const RealLift& v) { return lift_feasible(bundle, unit_modulus_projection(v)); };

  for (int trial = 0; trial < params.max_ts_iter; ++trial) {
    bundle.set_rho_2(rho);
    opts.eps3 = eps3;
    opts.w = w;
    const RealLift start = warm.norm() > 0.0 ? warm : random_unit_lift(bundle.N(), params.seed);
    const PpResult pp = pp_pdg(bundle, start, opts);
    out.trials = trial + 1;
    out.pp_iterations += pp.q_star;
    out.pdg_iterations += pp.pdg_iterations;
    const RealLift vhat = unit_modulus_projection(pp.v_star);
    out.weights = restore(vhat);
    out.warm = pp.v_star;
    if (lift_feasible(bundle, vhat)) {
      out.feasible = true;
      return out;
    }
    warm = pp.v_star;
    if (pp.capped && w > params.w_min) {
      w = std::max(0.5 * w, params.w_min);
    } else if (1.0 - pp.v_star.squaredNorm() > params.eps_f || violation_check(bundle, pp.v_star, vhat)) {
      rho += params.delta_rho_2;
      eps3 = std::max(0.5 * eps3, params.eps_min);
    } else if (eps3 > params.eps_min) {
      eps3 = std::max(0.5 * eps3, params.eps_min);
    } else {
      return out;
    }
  }
  return out;
}

FeasibilityVerdict check_feasible_pp(const SampleBundle& bundle, const RealLift& v0, const SolverParams& params,
                                     std::vector<int> work) {
  FeasibilityVerdict total;
  RealLift start = v0;
  while (true) {
    const FeasibilityVerdict v = check_feasible_pp(bundle.subset(work), start, params);
    total.trials += v.trials;
    total.pp_iterations += v.pp_iterations;
    total.pdg_iterations += v.pdg_iterations;
    total.weights = v.weights;
    total.warm = v.warm;
    if (!v.feasible) return total;
    const Eigen::VectorXd slack = bundle.gains(lift(v.weights)) - bundle.gamma();
    if (slack.minCoeff() >= 0.0) {
      total.feasible = true;
      return total;
    }
    add_missed_samples(slack, work);
    start = v.warm;
  }
}

void add_missed_samples(const Eigen::VectorXd& slack, std::vector<int>& work) {
  const Eigen::Index J = slack.size();
  for (Eigen::Index k = 0; k < J;) {
    if (slack[k] >= 0.0) {
      ++k;
      continue;
    }
    Eigen::Index worst = k;
    for (; k < J && slack[k] < 0.0; ++k)
      if (slack[k] < slack[worst]) worst = k;
    work.push_back(static_cast<int>(worst));
  }
  std::sort(work.begin(), work.end());
  work.erase(std::unique(work.begin(), work.end()), work.end());
}

}  // namespace beamforge
