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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coherency/certify/frame.hpp"
#include "coherency/certify/steady_state.hpp"
#include "coherency/engine/simulate.hpp"
#include "coherency/error.hpp"
#include "support.hpp"

namespace coherency::certify {
namespace {

using signals::DisturbanceProfile;
using testing::vec;

TEST(SteadyLinear, TwoBusClosedForm) {
  const auto net = testing::two_bus();
  const auto rfs = testing::linear_responses({1.0, 1.0});
  const auto b = nodal::sector_bounds(rfs, net.inertia());
  const auto ss = steady_state_linear(net, rfs, b, vec({0.3, -0.1}));
  EXPECT_NEAR(ss.omega_s, 0.1, 1e-12);
  EXPECT_NEAR(ss.theta(0) - ss.theta(1), 0.2, 1e-12);
  EXPECT_NEAR(ss.theta(0) + ss.theta(1), 0.0, 1e-12);
  EXPECT_LT(ss.residual, 1e-10);
}

TEST(SteadyNonlinear, TwoBusArcsine) {
  const auto net = testing::two_bus();
  const auto rfs = testing::linear_responses({1.0, 1.0});
  const auto b = nodal::sector_bounds(rfs, net.inertia());
  const auto ss = steady_state_nonlinear(net, rfs, b, vec({0.3, -0.3}), 1.0, 0.3);
  EXPECT_NEAR(ss.omega_s, 0.0, 1e-12);
  EXPECT_NEAR(ss.theta(0) - ss.theta(1), std::asin(0.3), 1e-10);
  EXPECT_LT(ss.residual, 1e-10);
  // k = 2 halves the needed sine.
  const auto s2 = steady_state_nonlinear(net, rfs, b, vec({0.3, -0.3}), 2.0, 0.3);
  EXPECT_NEAR(s2.theta(0) - s2.theta(1), std::asin(0.15), 1e-10);
}

TEST(SteadyState, HoldsUnderIntegration) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = testing::random_instance(seed, 3, 8);
    const auto b = nodal::sector_bounds(inst.rfs, inst.net.inertia());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-0.02, 0.02);
    Eigen::VectorXd xi(static_cast<Eigen::Index>(inst.net.bus_count()));
    for (auto& x : xi) x = U(rng);
    const auto p = DisturbanceProfile::constant(xi);
    const auto times = engine::make_grid(50.0, 0.5, p);
    engine::IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;

    const auto lin = steady_state_linear(inst.net, inst.rfs, b, xi);
    EXPECT_LT(lin.residual, 1e-10);
    const Eigen::VectorXd w0 = Eigen::VectorXd::Constant(xi.size(), lin.omega_s);
    auto tr = engine::integrate_swing(inst.net, inst.rfs, p, {lin.theta, w0, engine::InitKind::Steady},
                                      engine::Flow::linear(), cfg, times);
    EXPECT_LT((tr.omega.array() - lin.omega_s).abs().maxCoeff(), 1e-7);

    const auto non = steady_state_nonlinear(inst.net, inst.rfs, b, xi, 1.0, 0.2);
    EXPECT_LT(non.residual, 1e-10);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Constant(xi.size(), non.omega_s);
    tr = engine::integrate_swing(inst.net, inst.rfs, p, {non.theta, v0, engine::InitKind::Steady},
                                 engine::Flow::sinusoidal(1.0), cfg, times);
    EXPECT_LT((tr.omega.array() - non.omega_s).abs().maxCoeff(), 1e-7);
  }
}

TEST(Frame, HessianMatchesGradientDifferences) {
  const auto inst = testing::random_instance(11, 4, 7);
  const auto frame = TransformedFrame::build(inst.net);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  Eigen::VectorXd x(frame.Y.cols());
  for (auto& v : x) v = U(rng);
  const double h = 1e-6;
  const auto H = frame.hessian(x);
  const auto g = frame.gradient(x);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(x.size());
    e(j) = h;
    const Eigen::VectorXd fd = (frame.gradient(x + e) - frame.gradient(x - e)) / (2 * h);
    EXPECT_LT((fd - H.col(j)).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR((frame.energy(x + e) - frame.energy(x - e)) / (2 * h), g(j), 1e-6);
  }
}

TEST(Frame, TildeRoundTrip) {
  const auto inst = testing::random_instance(5);
  const auto frame = TransformedFrame::build(inst.net);
  Eigen::VectorXd th = Eigen::VectorXd::LinSpaced(frame.buses(), -0.2, 0.3);
  const auto back = frame.to_tilde(frame.from_tilde(frame.to_tilde(th)));
  EXPECT_LT((back - frame.to_tilde(th)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Newton, RejectsOutOfReachTarget) {
  const auto net = testing::two_bus();
  const auto rfs = testing::linear_responses({1.0, 1.0});
  const auto b = nodal::sector_bounds(rfs, net.inertia());
  EXPECT_THROW(steady_state_nonlinear(net, rfs, b, vec({2.0, -2.0}), 1.0, 0.3), Error);
}

}  // namespace
}  // namespace coherency::certify
