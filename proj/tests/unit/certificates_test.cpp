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
#include <numbers>

#include "coherency/certify/certificates.hpp"
#include "coherency/certify/steady_state.hpp"
#include "coherency/error.hpp"
#include "support.hpp"

namespace coherency::certify {
namespace {

using signals::DisturbanceProfile;
using signals::Term;
using testing::vec;

TEST(LinearConstants, TwoBusOracle) {
  // N = 2, M = 1, mu = L = 1, lambda2 = 2.
  const auto lc = linear_constants(2.0, 1.0, 1.0, 2.0, 1.0, 1.0, 0.1, 0.0);
  EXPECT_NEAR(lc.K, 256.0, 1e-12);
  EXPECT_NEAR(lc.eta_star, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(lc.c, 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(lc.limiting_term, 1152.0 * 0.01, 1e-10);
  EXPECT_DOUBLE_EQ(lc.limiting_term_lim, 0.0);
  EXPECT_NEAR(lc.phi1, 1.0, 1e-15);
  EXPECT_NEAR(lc.phi2, 16.0 / 3.0, 1e-14);
  EXPECT_NEAR(lc.alpha_star, 8.5, 1e-13);
}

TEST(LinearConstants, StiffLimit) {
  const double mu = 0.7, L = 1.3;
  const auto lc = linear_constants(400.0 * L * L * 10, mu, L, 5.0, 1.0, 1.0, 0.0, 0.0);
  EXPECT_NEAR(lc.c, mu / 4.0, 0.01 * mu / 4.0);
  EXPECT_LT(lc.c, mu / 4.0);
}

TEST(NonlinearConstants, Zeta2AndOffset) {
  // 2-bus, M = B = 1, mu = L = k = 1, cos(2 rho) = 0.8.
  const double rho = 0.5 * std::acos(0.8);
  const auto nc = nonlinear_constants(2.0, 2.0, 2.0, std::sqrt(2.0), 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0, rho);
  EXPECT_NEAR(nc.zeta2, 0.2, 1e-14);
  EXPECT_NEAR(nc.phi3_offset, 0.2, 1e-14);
  const double s = std::sin(rho);
  const double eta = 1.0 / (4.0 * (1.0 + 4.0 / (4.0 * s * s)) + std::sqrt(8.0 / (2.0 * s)));
  EXPECT_NEAR(nc.eta_star, eta, 1e-15);
  EXPECT_NEAR(nc.c, eta * 4.0 * s * s / (2.0 + 2.0 * s), 1e-15);
  EXPECT_NEAR(nc.alpha_star, 4.0 * nc.zeta1, 1e-15);
  EXPECT_NEAR(nc.Delta_bar, std::min(std::sqrt(nc.V_c / nc.zeta1), std::sqrt(2.0) * 0.2), 1e-15);
  EXPECT_GT(nc.V_c, 0.0);
  EXPECT_GT(nc.C_bar, 0.0);
}

TEST(Certificate, BoundShape) {
  BoundCertificate c;
  EXPECT_TRUE(std::isinf(c.bound(0.0)));
  c.rate = 0.5;
  c.floor = 0.1;
  c.segments = {{0.0, 2.0}, {3.0, 1.0}};
  c.valid_until = 10.0;
  EXPECT_NEAR(c.bound(0.0), 2.1, 1e-15);
  EXPECT_NEAR(c.bound(2.0), 2.0 * std::exp(-1.0) + 0.1, 1e-15);
  EXPECT_NEAR(c.bound(4.0), std::exp(-0.5) + 0.1, 1e-15);
  EXPECT_TRUE(std::isinf(c.bound(10.5)));
  EXPECT_TRUE(std::isinf(c.bound(-1.0)));
}

struct TwoBusCase {
  grid::PowerNetwork net = testing::two_bus();
  std::vector<nodal::ResponseFunction> rfs = testing::linear_responses({1.0, 1.0});
  nodal::SectorBounds bounds = nodal::sector_bounds(rfs, net.inertia());
};

DisturbanceProfile steps(double a, double b) {
  DisturbanceProfile::StageTerms s(2);
  s[0] = {Term::step(a)};
  s[1] = {Term::step(b)};
  return DisturbanceProfile::build(2, {0.0}, {s}, vec({0.0, 0.0}));
}

TEST(P1Certificate, ScalesWithJump) {
  TwoBusCase tb;
  const auto cert = prop1_certificate(tb.net, tb.rfs, tb.bounds, steps(0.03, -0.04), engine::InitKind::Steady);
  EXPECT_EQ(cert.kind, BoundCertificate::Kind::P1);
  EXPECT_TRUE(cert.requires_steady_init);
  const auto lc = linear_constants(2.0, tb.bounds.mu, tb.bounds.L, 2.0, 1.0, 1.0, 0.0, 0.0);
  EXPECT_NEAR(cert.bound(0.0), lc.alpha_star * 0.0025, 1e-12);
  EXPECT_NEAR(cert.rate, lc.c, 1e-14);
  EXPECT_DOUBLE_EQ(cert.floor, 0.0);
  try {
    prop1_certificate(tb.net, tb.rfs, tb.bounds, steps(0.03, -0.04), engine::InitKind::Zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSteadyInit);
  }
}

TEST(T1Certificate, AlphaFromInitialState) {
  TwoBusCase tb;
  const auto p = steps(0.03, -0.04);
  const engine::InitialState init{vec({0.0, 0.0}), vec({0.1, -0.1})};
  const auto cert = theorem1_certificate(tb.net, tb.rfs, tb.bounds, p, init);
  EXPECT_EQ(cert.flow, engine::Flow::Kind::Linear);
  EXPECT_EQ(cert.network_fingerprint, tb.net.fingerprint());
  EXPECT_GT(cert.constant("alpha"), 0.0);
  EXPECT_NEAR(cert.bound(0.0), cert.constant("alpha") + cert.floor, 1e-15);
  EXPECT_FALSE(cert.name().empty());
}

TEST(T2Certificate, SetupErrors) {
  TwoBusCase tb;
  const auto p = steps(0.01, -0.01);
  const engine::InitialState init{vec({0.0, 0.0}), vec({0.0, 0.0})};
  try {
    theorem2_certificate(tb.net, tb.rfs, tb.bounds, p, 1.0, 1.0, init);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RhoOutOfRange);
  }
  try {
    theorem2_certificate(tb.net, tb.rfs, tb.bounds, p, -1.0, 0.3, init);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveScale);
  }
  try {
    theorem2_certificate(tb.net, tb.rfs, tb.bounds, steps(0.9, -0.9), 1.0, 0.3, init);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AssumptionTwoFailed);
  }
}

TEST(T2Certificate, FeasibleSmallDisturbance) {
  TwoBusCase tb;
  const auto p = steps(0.01, -0.01);
  const auto cert = theorem2_certificate(tb.net, tb.rfs, tb.bounds, p, 1.0, 0.3,
                                         {vec({0.0, 0.0}), vec({0.0, 0.0})});
  EXPECT_EQ(cert.flow, engine::Flow::Kind::Sinusoidal);
  EXPECT_TRUE(cert.failed_conditions.empty());
  EXPECT_GT(cert.rate, 0.0);
  EXPECT_LE(cert.constant("V_bar"), cert.constant("V_c"));
}

TEST(P2Certificate, JumpLimit) {
  TwoBusCase tb;
  const auto ok = prop2_certificate(tb.net, tb.rfs, tb.bounds, steps(0.001, -0.001), 1.0, 0.3,
                                    engine::InitKind::Steady);
  EXPECT_LE(std::sqrt(2.0) * 0.001, ok.constant("Delta_bar"));
  EXPECT_NEAR(ok.bound(0.0), ok.constant("alpha_star") * 2e-6, 1e-15);
  try {
    prop2_certificate(tb.net, tb.rfs, tb.bounds, steps(0.3, -0.3), 1.0, 0.3, engine::InitKind::Steady);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::JumpTooLarge || e.code() == ErrorCode::AssumptionTwoFailed);
  }
}

TEST(SearchRho, PicksLargestFeasible) {
  TwoBusCase tb;
  const auto p = steps(0.1, -0.1);
  const auto rho = search_rho(tb.net, p, tb.bounds, 1.0, 64);
  ASSERT_TRUE(rho.has_value());
  EXPECT_TRUE(signals::check_assumption2(tb.net, p, tb.bounds, *rho, 1.0).pass);
  const double next = *rho + (std::numbers::pi / 4) / 65.0;
  if (next < std::numbers::pi / 4) EXPECT_FALSE(signals::check_assumption2(tb.net, p, tb.bounds, next, 1.0).pass);
  EXPECT_FALSE(search_rho(tb.net, steps(5.0, -5.0), tb.bounds, 1.0, 64).has_value());
}

}  // namespace
}  // namespace coherency::certify
