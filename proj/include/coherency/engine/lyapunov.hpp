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

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coherency/certify/frame.hpp"
#include "coherency/engine/simulate.hpp"
#include "coherency/nodal/response.hpp"
#include "coherency/signals/disturbance.hpp"

namespace coherency::engine {

/// Pieces of the Lyapunov function at one state.
struct LyapunovValue {
  double V = 0.0;
  double W_k = 0.0;
  double W_p = 0.0;  // W_pc in linear mode
  double W_c = 0.0;  // zero in linear mode
  Eigen::VectorXd theta_star;  // theta~* at this state
  bool cohesive = true;        // theta~ in S(rho) (nonlinear mode)
};

/// Linear-flow V = 1/2 d_w^T M d_w + 1/2 h^T Lambda_P h with
/// h = d_theta + eta Lambda_P^-1 Y^T M^1/2 d_w and d_theta = theta~ - Lambda_P^-1 f~.
/// `frame` must be built from the effective (scaled) network.
LyapunovValue linear_lyapunov(const certify::TransformedFrame& frame, double eta,
                              std::span<const nodal::ResponseFunction> rfs, const Eigen::VectorXd& theta,
                              const Eigen::VectorXd& omega, double omega_b, const Eigen::VectorXd& xi);

/// Sinusoidal-flow V = W_k + k (U(theta~) - U(theta~*) - grad U(theta~*)^T (theta~ - theta~*))
/// + eta (grad U(theta~) - grad U(theta~*))^T Y^T M^1/2 d_w, with theta~* solving
/// k grad U(theta~*) = f~ inside S(2 rho). `frame` is built from B0.
/// Throws ThetaStarSolveFailure.
LyapunovValue nonlinear_lyapunov(const certify::TransformedFrame& frame, double k, double rho, double eta,
                                 std::span<const nodal::ResponseFunction> rfs, const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& omega, double omega_b, const Eigen::VectorXd& xi,
                                 const Eigen::VectorXd* warm_start = nullptr);

/// Squared bound on |d f~/dt| along the blended trajectory, restarted at the
/// start of the stage holding t:
///   2 N M_b C^2 (1 + L/mu)^2 + (2 N L^2 / M_b) |f_b(w_b(t_s)) + xi_b(t_s+)|^2 e^{-2 mu (t - t_s)}
double rate_envelope(double t, double t_stage, double N, double mean_inertia, double C,
                     const nodal::SectorBounds& bounds, double blended_force);

struct LyapunovMode {
  enum class Kind { Linear, Nonlinear };
  Kind kind = Kind::Linear;
  double rho = 0.0;  // nonlinear only
};

struct LyapunovTrace {
  double eta = 0.0;
  double rate = 0.0;        // decay coefficient in V' <= -rate V + gain * envelope
  double gain = 0.0;
  std::vector<double> V, W_k, W_p, W_c;
  std::vector<double> Vdot;        // centred difference, NaN where not interior
  std::vector<double> Vdot_error;  // differencing error estimate
  std::vector<double> envelope;    // squared |d f~/dt| bound
  std::vector<double> ftilde_rate; // centred-difference |d f~/dt|, NaN where not interior
  std::vector<double> rhs;         // -rate V + gain * envelope
  std::vector<char> cohesive;

  /// Interior samples where Vdot <= rhs + 1e-6 + Vdot_error, and how many were checked.
  std::pair<std::size_t, std::size_t> decay_holds() const;
};

/// `net` is the unscaled network; the trajectory's flow scale k is applied.
/// Throws AssumptionMismatch when the mode does not match the run's flow and
/// OutsideCohesiveSet when a nonlinear-mode sample leaves S(rho).
LyapunovTrace lyapunov_trace(const Trajectory& traj, const grid::PowerNetwork& net,
                             std::span<const nodal::ResponseFunction> rfs,
                             const signals::DisturbanceProfile& p, const nodal::SectorBounds& bounds,
                             LyapunovMode mode, bool allow_outside = false);

}  // namespace coherency::engine
