// Copyright 2026 The coherency Authors.
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

#include "coherency/engine/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "coherency/certify/certificates.hpp"
#include "coherency/certify/steady_state.hpp"
#include "coherency/error.hpp"

namespace coherency::engine {

namespace {

Eigen::VectorXd blended_injection(std::span<const nodal::ResponseFunction> rfs, double omega_b,
                                  const Eigen::VectorXd& xi) {
  Eigen::VectorXd g = xi;
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) += rfs[static_cast<std::size_t>(i)].eval(omega_b).value;
  return g;
}

double kinetic(const certify::TransformedFrame& frame, const Eigen::VectorXd& d_omega) {
  return 0.5 * (frame.sqrt_m.cwiseProduct(d_omega)).squaredNorm();
}

}  // namespace

LyapunovValue linear_lyapunov(const certify::TransformedFrame& frame, double eta,
                              std::span<const nodal::ResponseFunction> rfs, const Eigen::VectorXd& theta,
                              const Eigen::VectorXd& omega, double omega_b, const Eigen::VectorXd& xi) {
  LyapunovValue v;
  const Eigen::VectorXd d_omega = omega.array() - omega_b;
  const Eigen::VectorXd f_tilde = frame.project(blended_injection(rfs, omega_b, xi));
  v.theta_star = frame.Lambda_P_llt.solve(f_tilde);
  const Eigen::VectorXd d_theta = frame.to_tilde(theta) - v.theta_star;
  const Eigen::VectorXd hat = d_theta + eta * frame.Lambda_P_llt.solve(frame.project_weighted(d_omega));
  v.W_k = kinetic(frame, d_omega);
  v.W_p = 0.5 * hat.dot(frame.Lambda_P * hat);
  v.V = v.W_k + v.W_p;
  return v;
}

LyapunovValue nonlinear_lyapunov(const certify::TransformedFrame& frame, double k, double rho, double eta,
                                 std::span<const nodal::ResponseFunction> rfs, const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& omega, double omega_b, const Eigen::VectorXd& xi,
                                 const Eigen::VectorXd* warm_start) {
  LyapunovValue v;
  const Eigen::VectorXd d_omega = omega.array() - omega_b;
  const Eigen::VectorXd f_tilde = frame.project(blended_injection(rfs, omega_b, xi));
  Eigen::VectorXd start;
  if (warm_start && frame.in_cohesive_set(*warm_start, 2.0 * rho)) {
    start = *warm_start;
  } else {
    start = frame.Lambda_P_llt.solve(f_tilde) / k;
    const double limit = M_PI / 2.0 - 2.0 * rho;
    const double reach = frame.max_angle(start);
    if (reach >= limit) start *= 0.9 * limit / reach;
  }
  const auto nr = certify::solve_gradient_equation(frame, k, f_tilde, start, rho, 1e-12);
  if (!nr.converged) {
    throw Error(ErrorCode::ThetaStarSolveFailure,
                "no solution of k grad U = f~ in S(2 rho), residual " + std::to_string(nr.residual));
  }
  v.theta_star = nr.theta_tilde;
  const Eigen::VectorXd tt = frame.to_tilde(theta);
  const Eigen::VectorXd grad_star = frame.gradient(v.theta_star);
  v.W_k = kinetic(frame, d_omega);
  v.W_p = k * (frame.energy(tt) - frame.energy(v.theta_star) - grad_star.dot(tt - v.theta_star));
  v.W_c = (frame.gradient(tt) - grad_star).dot(frame.project_weighted(d_omega));
  v.V = v.W_k + v.W_p + eta * v.W_c;
  v.cohesive = frame.in_cohesive_set(tt, rho);
  return v;
}

double rate_envelope(double t, double t_stage, double N, double mean_inertia, double C,
                     const nodal::SectorBounds& bounds, double blended_force) {
  const double mu = bounds.mu;
  const double L = bounds.L;
  const double steady = 2.0 * N * mean_inertia * C * C * (1.0 + L / mu) * (1.0 + L / mu);
  const double transient = 2.0 * N * L * L / mean_inertia * blended_force * blended_force *
                           std::exp(-2.0 * mu * (t - t_stage));
  return steady + transient;
}

std::pair<std::size_t, std::size_t> LyapunovTrace::decay_holds() const {
  std::size_t ok = 0, checked = 0;
  for (std::size_t j = 0; j < V.size(); ++j) {
    if (!std::isfinite(Vdot[j])) continue;
    ++checked;
    if (Vdot[j] <= rhs[j] + 1e-6 + Vdot_error[j]) ++ok;
  }
  return {ok, checked};
}

LyapunovTrace lyapunov_trace(const Trajectory& traj, const grid::PowerNetwork& net,
                             std::span<const nodal::ResponseFunction> rfs,
                             const signals::DisturbanceProfile& p, const nodal::SectorBounds& bounds,
                             LyapunovMode mode, bool allow_outside) {
  const bool linear = mode.kind == LyapunovMode::Kind::Linear;
  if (linear != (traj.flow.kind == Flow::Kind::Linear)) {
    throw Error(ErrorCode::AssumptionMismatch, "Lyapunov mode does not match the run's flow model");
  }
  const double k = traj.flow.k;
  const auto scaled = grid::scale_lines(net, k);
  if (scaled.fingerprint() != traj.network_fingerprint) {
    throw Error(ErrorCode::AssumptionMismatch, "trajectory was produced on a different network");
  }
  const auto S = traj.times.size();
  const double N = static_cast<double>(net.bus_count());
  const double mb = net.mean_inertia();
  const auto C = signals::rate_stats(p, net.inertia()).C;

  const auto frame = certify::TransformedFrame::build(linear ? scaled : net);
  LyapunovTrace out;
  if (linear) {
    const auto cst = certify::linear_constants(frame.sigma_m, bounds.mu, bounds.L, N, mb, net.min_inertia(),
                                               C, C);
    out.eta = cst.eta_star;
    out.rate = cst.eta_star / 2.0;
    out.gain = 1.0 / (cst.eta_star * frame.sigma_m);
  } else {
    const auto spec = grid::spectral_summary(net);
    const auto cst = certify::nonlinear_constants(spec.lambda2, spec.lambdaN, spec.lambda2_L, spec.norm_AY,
                                                  bounds.mu, bounds.L, N, mb, net.min_inertia(),
                                                  net.max_inertia(), k, mode.rho);
    out.eta = cst.eta_star;
    out.rate = cst.c;
    out.gain = cst.phi1 + cst.phi2;
  }

  // Stage index of each sample and the sample opening each stage.
  std::vector<std::size_t> stage(S, 0);
  std::vector<std::size_t> opening{0};
  for (const auto m : traj.stage_marks) opening.push_back(m);
  for (std::size_t s = 1; s < opening.size(); ++s) {
    for (std::size_t j = opening[s]; j < S; ++j) stage[j] = s;
  }

  const auto nan = std::numeric_limits<double>::quiet_NaN();
  out.V.resize(S);
  out.W_k.resize(S);
  out.W_p.resize(S);
  out.W_c.resize(S);
  out.Vdot.assign(S, nan);
  out.Vdot_error.assign(S, 0.0);
  out.envelope.resize(S);
  out.ftilde_rate.assign(S, nan);
  out.rhs.resize(S);
  out.cohesive.assign(S, 1);

  std::vector<Eigen::VectorXd> ftilde(S);
  Eigen::VectorXd warm;
  for (std::size_t j = 0; j < S; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    const double t = traj.times[j];
    const auto sample = p.eval_in_stage(stage[j], t);
    const Eigen::VectorXd theta = traj.theta.col(col);
    const Eigen::VectorXd omega = traj.omega.col(col);
    const double wb = traj.omega_b(col);
    LyapunovValue v;
    if (linear) {
      v = linear_lyapunov(frame, out.eta, rfs, theta, omega, wb, sample.xi);
    } else {
      v = nonlinear_lyapunov(frame, k, mode.rho, out.eta, rfs, theta, omega, wb, sample.xi,
                             warm.size() ? &warm : nullptr);
      warm = v.theta_star;
      if (!v.cohesive && !allow_outside) {
        throw Error(ErrorCode::OutsideCohesiveSet, "theta~ left S(rho) at t = " + std::to_string(t));
      }
    }
    out.V[j] = v.V;
    out.W_k[j] = v.W_k;
    out.W_p[j] = v.W_p;
    out.W_c[j] = v.W_c;
    out.cohesive[j] = v.cohesive ? 1 : 0;
    Eigen::VectorXd g = sample.xi;
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) += rfs[static_cast<std::size_t>(i)].eval(wb).value;
    ftilde[j] = frame.project(g);

    const std::size_t open = opening[stage[j]];
    const double t_open = traj.times[open];
    const auto xi_open = p.eval_in_stage(stage[j], t_open).xi;
    const double force = nodal::blended_response(rfs, traj.omega_b(static_cast<Eigen::Index>(open))).value +
                         xi_open.mean();
    out.envelope[j] = rate_envelope(t, t_open, N, mb, C, bounds, force);
    out.rhs[j] = -out.rate * v.V + out.gain * out.envelope[j];
  }

  for (std::size_t j = 1; j + 1 < S; ++j) {
    if (stage[j - 1] != stage[j] || stage[j + 1] != stage[j]) continue;
    const double hb = traj.times[j] - traj.times[j - 1];
    const double hf = traj.times[j + 1] - traj.times[j];
    const double back = (out.V[j] - out.V[j - 1]) / hb;
    const double fwd = (out.V[j + 1] - out.V[j]) / hf;
    out.Vdot[j] = (out.V[j + 1] - out.V[j - 1]) / (hb + hf);
    out.Vdot_error[j] = 0.5 * std::abs(fwd - back);
    out.ftilde_rate[j] = (ftilde[j + 1] - ftilde[j - 1]).norm() / (hb + hf);
  }
  return out;
}

}  // namespace coherency::engine
