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

#include "coherency/certify/frame.hpp"
#include "coherency/engine/lyapunov.hpp"
#include "coherency/error.hpp"
#include "support.hpp"

namespace coherency::engine {
namespace {

using signals::DisturbanceProfile;
using signals::Term;
using testing::vec;

DisturbanceProfile mixed(std::size_t n) {
  DisturbanceProfile::StageTerms s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sgn = i % 2 ? -1.0 : 1.0;
    s[i] = {Term::step(0.05 * sgn), Term::sinusoid(0.02, 1.0 + 0.3 * static_cast<double>(i))};
  }
  return DisturbanceProfile::build(n, {0.0}, {s}, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
}

IntegratorConfig tight() {
  IntegratorConfig c;
  c.rel_tol = 1e-11;
  c.abs_tol = 1e-13;
  return c;
}

TEST(Envelope, ClosedForm) {
  const nodal::SectorBounds b{0.5, 2.0};
  // 2 N Mb C^2 (1 + L/mu)^2 + (2 N L^2 / Mb) F^2 e^{-2 mu (t - ts)}
  const double v = rate_envelope(3.0, 1.0, 4.0, 2.0, 0.1, b, 0.3);
  EXPECT_NEAR(v, 2 * 4 * 2 * 0.01 * 25 + (2 * 4 * 4 / 2.0) * 0.09 * std::exp(-2.0), 1e-13);
}

TEST(LinearLyapunov, ZeroAtEquilibrium) {
  const auto net = testing::two_bus();
  const auto rfs = testing::linear_responses({1.0, 1.0});
  const auto frame = certify::TransformedFrame::build(net);
  // xi = (0.3, -0.3): omega_b = 0, line angle 0.3.
  const auto v = linear_lyapunov(frame, 0.1, rfs, vec({0.15, -0.15}), vec({0.0, 0.0}), 0.0, vec({0.3, -0.3}));
  EXPECT_NEAR(v.V, 0.0, 1e-14);
  const auto w = linear_lyapunov(frame, 0.1, rfs, vec({0.15, -0.15}), vec({0.2, -0.2}), 0.0, vec({0.3, -0.3}));
  EXPECT_NEAR(w.W_k, 0.5 * (0.04 + 0.04), 1e-14);
  EXPECT_GT(w.V, 0.0);
}

TEST(Trace, LinearDecayHolds) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto inst = testing::random_instance(seed, 3, 8);
    const auto n = inst.net.bus_count();
    const auto b = nodal::sector_bounds(inst.rfs, inst.net.inertia());
    const auto p = mixed(n);
    Eigen::VectorXd w0 = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), -0.1, 0.1);
    const InitialState init{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), w0};
    const auto times = make_grid(20.0, 0.01, p);
    const auto tr = simulate(inst.net, inst.rfs, p, init, Flow::linear(), tight(), times);
    const auto lt = lyapunov_trace(tr, inst.net, inst.rfs, p, b, {});
    const auto [ok, checked] = lt.decay_holds();
    ASSERT_GT(checked, 1000u);
    EXPECT_GE(static_cast<double>(ok), 0.99 * static_cast<double>(checked));
    for (const double v : lt.V) EXPECT_GE(v, 0.0);
  }
}

TEST(Trace, NonlinearModeOnSmallDisturbance) {
  const auto net = testing::triangle();
  const auto rfs = testing::linear_responses({1.0, 1.5, 2.0});
  const auto b = nodal::sector_bounds(rfs, net.inertia());
  const auto p = mixed(3);
  const InitialState init{vec({0, 0, 0}), vec({0, 0, 0})};
  const auto times = make_grid(10.0, 0.01, p);
  const auto tr = simulate(net, rfs, p, init, Flow::sinusoidal(1.0), tight(), times);
  const auto lt = lyapunov_trace(tr, net, rfs, p, b, {LyapunovMode::Kind::Nonlinear, 0.3});
  EXPECT_GT(lt.rate, 0.0);
  for (const char c : lt.cohesive) EXPECT_TRUE(c);
  const auto [ok, checked] = lt.decay_holds();
  EXPECT_GE(static_cast<double>(ok), 0.99 * static_cast<double>(checked));
}

TEST(Trace, ModeMismatch) {
  const auto net = testing::two_bus();
  const auto rfs = testing::linear_responses({1.0, 1.0});
  const auto b = nodal::sector_bounds(rfs, net.inertia());
  const auto p = DisturbanceProfile::constant(vec({0.1, -0.1}));
  const auto times = make_grid(1.0, 0.1, p);
  const auto tr = simulate(net, rfs, p, {vec({0, 0}), vec({0, 0})}, Flow::sinusoidal(1.0), {}, times);
  try {
    lyapunov_trace(tr, net, rfs, p, b, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AssumptionMismatch);
  }
  try {
    lyapunov_trace(tr, testing::two_bus(1, 1, 2), rfs, p, b, {LyapunovMode::Kind::Nonlinear, 0.3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AssumptionMismatch);
  }
}

}  // namespace
}  // namespace coherency::engine
