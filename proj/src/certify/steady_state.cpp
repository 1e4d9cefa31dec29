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

#include "coherency/certify/steady_state.hpp"

#include <cmath>
#include <numbers>

#include "coherency/error.hpp"
#include "coherency/signals/disturbance.hpp"

namespace coherency::certify {

namespace {

double synchronous_frequency(std::span<const nodal::ResponseFunction> rfs, double mean_inertia,
                             const nodal::SectorBounds& bounds, const Eigen::VectorXd& xi) {
  try {
    return nodal::invert_blended(rfs, mean_inertia, bounds.mu, -xi.mean());
  } catch (const Error& e) {
    throw Error(ErrorCode::InversionFailure, std::string("cannot solve f_b(w) = -xi_b: ") + e.what());
  }
}

Eigen::VectorXd nodal_injection(std::span<const nodal::ResponseFunction> rfs, double omega,
                                const Eigen::VectorXd& xi) {
  Eigen::VectorXd g = xi;
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) += rfs[static_cast<std::size_t>(i)].eval(omega).value;
  return g;
}

Eigen::VectorXd line_flows(const grid::PowerNetwork& net, double k, const Eigen::VectorXd& theta,
                           bool sinusoidal) {
  Eigen::VectorXd pe = Eigen::VectorXd::Zero(theta.size());
  for (const auto& l : net.lines()) {
    const auto a = static_cast<Eigen::Index>(l.from);
    const auto b = static_cast<Eigen::Index>(l.to);
    const double d = theta(a) - theta(b);
    const double f = k * l.sensitivity * (sinusoidal ? std::sin(d) : d);
    pe(a) += f;
    pe(b) -= f;
  }
  return pe;
}

}  // namespace

SteadyState steady_state_linear(const grid::PowerNetwork& net,
                                std::span<const nodal::ResponseFunction> rfs,
                                const nodal::SectorBounds& bounds, const Eigen::VectorXd& xi) {
  if (xi.size() != static_cast<Eigen::Index>(net.bus_count()) || rfs.size() != net.bus_count()) {
    throw Error(ErrorCode::DimensionMismatch, "steady state inputs have inconsistent sizes");
  }
  const auto frame = TransformedFrame::build(net);
  SteadyState ss;
  ss.omega_s = synchronous_frequency(rfs, net.mean_inertia(), bounds, xi);
  const Eigen::VectorXd g = nodal_injection(rfs, ss.omega_s, xi);
  ss.theta_tilde = frame.Lambda_P_llt.solve(frame.project(g));
  ss.theta = frame.from_tilde(ss.theta_tilde);
  ss.residual = (g - line_flows(net, 1.0, ss.theta, false)).cwiseAbs().maxCoeff();
  ss.iterations = 1;
  return ss;
}

NewtonResult solve_gradient_equation(const TransformedFrame& frame, double k, const Eigen::VectorXd& rhs,
                                     const Eigen::VectorXd& start, double rho, double tol, int max_iter) {
  NewtonResult res;
  res.theta_tilde = start;
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  Eigen::VectorXd r = k * frame.gradient(res.theta_tilde) - rhs;
  double rnorm = r.norm();
  res.residual = r.cwiseAbs().maxCoeff();
  for (int it = 0; it < max_iter; ++it) {
    if (res.residual <= tol * scale) {
      res.converged = true;
      return res;
    }
    const Eigen::MatrixXd J = k * frame.hessian(res.theta_tilde);
    Eigen::LLT<Eigen::MatrixXd> llt(J);
    Eigen::VectorXd step = llt.info() == Eigen::Success ? Eigen::VectorXd(llt.solve(r))
                                                        : Eigen::VectorXd(J.ldlt().solve(r));
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      const Eigen::VectorXd trial = res.theta_tilde - lambda * step;
      if (frame.in_cohesive_set(trial, 2.0 * rho)) {
        const Eigen::VectorXd rt = k * frame.gradient(trial) - rhs;
        const double tn = rt.norm();
        if (tn < rnorm || tn <= tol * scale) {
          res.theta_tilde = trial;
          r = rt;
          rnorm = tn;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    ++res.iterations;
    res.residual = r.cwiseAbs().maxCoeff();
    if (!accepted) break;
  }
  res.converged = res.residual <= tol * scale;
  return res;
}

SteadyState steady_state_nonlinear(const grid::PowerNetwork& baseline,
                                   std::span<const nodal::ResponseFunction> rfs,
                                   const nodal::SectorBounds& bounds, const Eigen::VectorXd& xi,
                                   double k, double rho) {
  if (xi.size() != static_cast<Eigen::Index>(baseline.bus_count()) || rfs.size() != baseline.bus_count()) {
    throw Error(ErrorCode::DimensionMismatch, "steady state inputs have inconsistent sizes");
  }
  const auto a2 = signals::check_assumption2(baseline, signals::DisturbanceProfile::constant(xi), bounds,
                                             rho, k);
  if (!a2.pass) {
    throw Error(ErrorCode::AssumptionTwoFailed,
                "disturbance too large for rho: margin " + std::to_string(a2.margin));
  }
  const auto frame = TransformedFrame::build(baseline);
  SteadyState ss;
  ss.omega_s = synchronous_frequency(rfs, baseline.mean_inertia(), bounds, xi);
  const Eigen::VectorXd g = nodal_injection(rfs, ss.omega_s, xi);
  const Eigen::VectorXd rhs = frame.project(g);

  // DC solution as the first iterate, pulled back inside S(2 rho) if needed.
  Eigen::VectorXd start = frame.Lambda_P_llt.solve(rhs) / k;
  const double limit = std::numbers::pi / 2.0 - 2.0 * rho;
  const double reach = frame.max_angle(start);
  if (reach >= limit) start *= 0.9 * limit / reach;

  const auto nr = solve_gradient_equation(frame, k, rhs, start, rho, 1e-13);
  if (!frame.in_cohesive_set(nr.theta_tilde, 2.0 * rho)) {
    throw Error(ErrorCode::LeftCohesiveSet, "Newton iterate left S(2 rho)");
  }
  if (!nr.converged) {
    throw Error(ErrorCode::NewtonDivergence,
                "Newton did not converge, residual " + std::to_string(nr.residual));
  }
  ss.theta_tilde = nr.theta_tilde;
  ss.theta = frame.from_tilde(ss.theta_tilde);
  ss.residual = (g - line_flows(baseline, k, ss.theta, true)).cwiseAbs().maxCoeff();
  ss.iterations = nr.iterations;
  return ss;
}

}  // namespace coherency::certify
