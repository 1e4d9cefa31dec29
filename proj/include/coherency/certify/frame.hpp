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

#include <Eigen/Dense>

#include "coherency/grid/network.hpp"

namespace coherency::certify {

/// Disagreement coordinates of a network: theta = 1 theta_bar + M^-1/2 Y theta~.
/// Lambda_P and the energy U are built from the sensitivities of `net` as
/// given; callers scale by k where the model requires it.
struct TransformedFrame {
  Eigen::MatrixXd Y;          // N x (N-1)
  Eigen::VectorXd sqrt_m;     // M^1/2 diagonal
  Eigen::VectorXd inv_sqrt_m; // M^-1/2 diagonal
  Eigen::MatrixXd Lambda_P;   // Y^T M^-1/2 L_B M^-1/2 Y
  Eigen::LLT<Eigen::MatrixXd> Lambda_P_llt;
  double sigma_m = 0.0;       // smallest eigenvalue of Lambda_P
  Eigen::MatrixXd AY;         // A^T M^-1/2 Y, E x (N-1)
  Eigen::VectorXd gamma;      // line weights
  double mean_inertia = 0.0;
  double min_inertia = 0.0;

  static TransformedFrame build(const grid::PowerNetwork& net);

  Eigen::Index buses() const noexcept { return Y.rows(); }

  /// theta~ = Y^T M^1/2 theta
  Eigen::VectorXd to_tilde(const Eigen::VectorXd& theta) const;
  /// zero-mean representative M^-1/2 Y theta~
  Eigen::VectorXd from_tilde(const Eigen::VectorXd& theta_tilde) const;
  /// Y^T M^-1/2 g
  Eigen::VectorXd project(const Eigen::VectorXd& g) const;
  /// Y^T M^1/2 v
  Eigen::VectorXd project_weighted(const Eigen::VectorXd& v) const;

  /// U(theta~) = -sum_l gamma_l cos((AY theta~)_l)
  double energy(const Eigen::VectorXd& theta_tilde) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta_tilde) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& theta_tilde) const;

  /// |AY theta~|_inf, the largest line angle difference.
  double max_angle(const Eigen::VectorXd& theta_tilde) const;
  /// Membership in S(rho) = { |AY theta~|_inf < pi/2 - rho }.
  bool in_cohesive_set(const Eigen::VectorXd& theta_tilde, double rho) const;
};

}  // namespace coherency::certify
