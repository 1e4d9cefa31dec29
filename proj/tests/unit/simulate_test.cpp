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
#include <sstream>

#include "coherency/engine/simulate.hpp"
#include "coherency/engine/trajectory_io.hpp"
#include "coherency/error.hpp"
#include "support.hpp"

namespace coherency::engine {
namespace {

using signals::DisturbanceProfile;
using signals::Term;
using testing::vec;

IntegratorConfig tight() {
  IntegratorConfig c;
  c.rel_tol = 1e-11;
  c.abs_tol = 1e-13;
  return c;
}

TEST(Grid, IncludesBreakpoints) {
  DisturbanceProfile::StageTerms s(1);
  s[0] = {Term::constant(0.0)};
  const auto p = DisturbanceProfile::build(1, {0.0, 0.25, 1.333}, {s, s, s}, vec({0.0}));
  const auto g = make_grid(2.0, 0.5, p);
  const std::vector<double> want = {0.0, 0.25, 0.5, 1.0, 1.333, 1.5, 2.0};
  ASSERT_EQ(g.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_DOUBLE_EQ(g[i], want[i]);
}

TEST(Simulate, TwoBusLinearClosedForm) {
  // M = D = B = 1: the sum mode decays as e^-t and the difference solves d'' + d' + 2 d = 0.
  const auto net = testing::two_bus();
  const auto rfs = testing::linear_responses({1.0, 1.0});
  const auto p = DisturbanceProfile::constant(vec({0.0, 0.0}));
  InitialState init{vec({0.0, 0.0}), vec({2.0, 0.0})};
  const auto times = make_grid(3.0, 0.01, p);
  const auto tr = simulate(net, rfs, p, init, Flow::linear(), tight(), times);
  const double w = std::sqrt(7.0) / 2.0;
  for (std::size_t j = 0; j < tr.sample_count(); ++j) {
    const double t = tr.times[j];
    const auto J = static_cast<Eigen::Index>(j);
    EXPECT_NEAR(tr.omega_coi(J), std::exp(-t), 1e-9);
    EXPECT_NEAR(tr.omega_b(J), std::exp(-t), 1e-9);
    const double ddot = 2.0 * std::exp(-t / 2) * (std::cos(w * t) - std::sin(w * t) / (2 * w));
    EXPECT_NEAR(tr.omega(0, J) - tr.omega(1, J), ddot, 1e-8);
    EXPECT_NEAR(tr.err(J), std::abs(ddot) / 2, 1e-8);
  }
  EXPECT_NEAR(tr.omega_coi(100), 0.36788, 1e-5);
}

TEST(Simulate, HomogeneousBusesStayTogether) {
  const auto net = grid::PowerNetwork::build({1.0, 2.0, 0.5}, {{0, 1, 1.5}, {1, 2, 0.7}});
  const auto rfs = testing::linear_responses({0.8, 1.6, 0.4});
  DisturbanceProfile::StageTerms s(3);
  for (std::size_t i = 0; i < 3; ++i) s[i] = {Term::step(0.1 * net.inertia()[i]), Term::sinusoid(0.02 * net.inertia()[i], 1.3)};
  const auto p = DisturbanceProfile::build(3, {0.0}, {s}, vec({0.0, 0.0, 0.0}));
  const auto times = make_grid(20.0, 0.05, p);
  for (const auto flow : {Flow::linear(), Flow::sinusoidal(1.0)}) {
    const auto tr = simulate(net, rfs, p, {vec({0, 0, 0}), vec({0, 0, 0})}, flow, tight(), times);
    EXPECT_LT(tr.err.maxCoeff(), 1e-9);
  }
}

TEST(Simulate, StageMarksAndRecentering) {
  const auto net = testing::path3();
  const auto rfs = testing::linear_responses({1, 1, 1});
  DisturbanceProfile::StageTerms a(3), b(3);
  a[0] = {Term::constant(0.1)};
  a[2] = {Term::constant(-0.1)};
  b[1] = {Term::step(0.05)};
  const auto p = DisturbanceProfile::build(3, {0.0, 2.0}, {a, b}, vec({0, 0, 0}));
  const auto times = make_grid(4.0, 0.1, p);
  const auto tr = simulate(net, rfs, p, {vec({0, 0, 0}), vec({0, 0, 0})}, Flow::linear(), tight(), times);
  ASSERT_EQ(tr.stage_marks.size(), 1u);
  EXPECT_DOUBLE_EQ(tr.times[tr.stage_marks[0]], 2.0);
  EXPECT_EQ(tr.network_fingerprint, net.fingerprint());
  EXPECT_TRUE(tr.spread.maxCoeff() <= 2.0 * tr.err.maxCoeff() + 1e-15);
}

TEST(Simulate, DimensionMismatch) {
  const auto net = testing::two_bus();
  const auto rfs = testing::linear_responses({1.0});
  const auto p = DisturbanceProfile::constant(vec({0.0, 0.0}));
  const std::vector<double> times = {0.0, 1.0};
  try {
    simulate(net, rfs, p, {vec({0, 0}), vec({0, 0})}, Flow::linear(), {}, times);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(TrajectoryIo, CsvRoundTrip) {
  const auto net = testing::triangle();
  const auto rfs = testing::linear_responses({1, 2, 3});
  const auto p = DisturbanceProfile::constant(vec({0.1, 0.0, -0.1}));
  const auto times = make_grid(1.0, 0.1, p);
  const auto tr = simulate(net, rfs, p, {vec({0, 0.1, 0}), vec({0.2, 0, 0})}, Flow::sinusoidal(2.0), {}, times);
  std::stringstream ss;
  write_trajectory_csv(ss, tr);
  const auto back = read_trajectory_csv(ss);
  ASSERT_EQ(back.sample_count(), tr.sample_count());
  EXPECT_EQ(back.network_fingerprint, tr.network_fingerprint);
  EXPECT_EQ(back.flow.kind, tr.flow.kind);
  EXPECT_DOUBLE_EQ(back.flow.k, 2.0);
  EXPECT_TRUE(back.omega.isApprox(tr.omega, 1e-15));
  EXPECT_TRUE(back.theta.isApprox(tr.theta, 1e-15));
  EXPECT_TRUE(back.err.isApprox(tr.err, 1e-15));
}

}  // namespace
}  // namespace coherency::engine
