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

#include <Eigen/Dense>

#include "coherency/certify/frame.hpp"
#include "coherency/grid/network.hpp"
#include "coherency/nodal/response.hpp"

namespace coherency::certify {

struct SteadyState {
  double omega_s = 0.0;
  Eigen::VectorXd theta;        // zero inertia-weighted mean
  Eigen::VectorXd theta_tilde;
  double residual = 0.0;        // max nodal power imbalance
  int iterations = 0;
};

/// Synchronous equilibrium of the linear-flow swing dynamics under constant xi.
/// Throws InversionFailure.
SteadyState steady_state_linear(const grid::PowerNetwork& net,
                                std::span<const nodal::ResponseFunction> rfs,
                                const nodal::SectorBounds& bounds, const Eigen::VectorXd& xi);

/// Equilibrium of the sinusoidal-flow dynamics with sensitivities k * B0
/// (`baseline` holds B0), inside S(2 rho). Throws AssumptionTwoFailed,
/// NewtonDivergence, LeftCohesiveSet.
SteadyState steady_state_nonlinear(const grid::PowerNetwork& baseline,
                                   std::span<const nodal::ResponseFunction> rfs,
                                   const nodal::SectorBounds& bounds, const Eigen::VectorXd& xi,
                                   double k, double rho);

struct NewtonResult {
  Eigen::VectorXd theta_tilde;
  double residual = 0.0;  // |k grad U - rhs|_inf
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton for k grad U(theta~) = rhs from `start`, halving steps that
/// leave S(2 rho) or fail to reduce the residual.
NewtonResult solve_gradient_equation(const TransformedFrame& frame, double k, const Eigen::VectorXd& rhs,
                                     const Eigen::VectorXd& start, double rho, double tol = 1e-12,
                                     int max_iter = 100);

}  // namespace coherency::certify
