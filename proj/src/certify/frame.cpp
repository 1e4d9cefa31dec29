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

#include "coherency/certify/frame.hpp"

#include <cmath>
#include <numbers>

#include "coherency/error.hpp"

namespace coherency::certify {

TransformedFrame TransformedFrame::build(const grid::PowerNetwork& net) {
  const auto mats = grid::laplacian_and_incidence(net);
  const auto n = static_cast<Eigen::Index>(net.bus_count());
  TransformedFrame fr;
  fr.Y = grid::inertia_basis(net.inertia());
  fr.sqrt_m.resize(n);
  fr.inv_sqrt_m.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    fr.sqrt_m(i) = std::sqrt(net.inertia()[static_cast<std::size_t>(i)]);
    fr.inv_sqrt_m(i) = 1.0 / fr.sqrt_m(i);
  }
  const Eigen::MatrixXd my = fr.inv_sqrt_m.asDiagonal() * fr.Y;
  fr.Lambda_P = my.transpose() * mats.laplacian * my;
  fr.Lambda_P = 0.5 * (fr.Lambda_P + fr.Lambda_P.transpose()).eval();
  fr.Lambda_P_llt.compute(fr.Lambda_P);
  if (fr.Lambda_P_llt.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenSolveFailure, "Lambda_P is not positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fr.Lambda_P, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenSolveFailure, "Lambda_P eigen-solve failed");
  fr.sigma_m = es.eigenvalues()(0);
  fr.AY = mats.incidence.transpose() * my;
  fr.gamma = mats.weights;
  fr.mean_inertia = net.mean_inertia();
  fr.min_inertia = net.min_inertia();
  return fr;
}

Eigen::VectorXd TransformedFrame::to_tilde(const Eigen::VectorXd& theta) const {
  return Y.transpose() * sqrt_m.cwiseProduct(theta);
}

Eigen::VectorXd TransformedFrame::from_tilde(const Eigen::VectorXd& theta_tilde) const {
  return inv_sqrt_m.cwiseProduct(Y * theta_tilde);
}

Eigen::VectorXd TransformedFrame::project(const Eigen::VectorXd& g) const {
  return Y.transpose() * inv_sqrt_m.cwiseProduct(g);
}

Eigen::VectorXd TransformedFrame::project_weighted(const Eigen::VectorXd& v) const {
  return Y.transpose() * sqrt_m.cwiseProduct(v);
}

double TransformedFrame::energy(const Eigen::VectorXd& theta_tilde) const {
  const Eigen::VectorXd d = AY * theta_tilde;
  return -(gamma.array() * d.array().cos()).sum();
}

Eigen::VectorXd TransformedFrame::gradient(const Eigen::VectorXd& theta_tilde) const {
  const Eigen::VectorXd d = AY * theta_tilde;
  return AY.transpose() * (gamma.array() * d.array().sin()).matrix();
}

Eigen::MatrixXd TransformedFrame::hessian(const Eigen::VectorXd& theta_tilde) const {
  const Eigen::VectorXd d = AY * theta_tilde;
  const Eigen::VectorXd w = (gamma.array() * d.array().cos()).matrix();
  return AY.transpose() * w.asDiagonal() * AY;
}

double TransformedFrame::max_angle(const Eigen::VectorXd& theta_tilde) const {
  if (AY.rows() == 0) return 0.0;
  return (AY * theta_tilde).cwiseAbs().maxCoeff();
}

bool TransformedFrame::in_cohesive_set(const Eigen::VectorXd& theta_tilde, double rho) const {
  return max_angle(theta_tilde) < std::numbers::pi / 2.0 - rho;
}

}  // namespace coherency::certify
