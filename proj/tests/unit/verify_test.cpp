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

#include <random>

#include "coherency/certify/certificates.hpp"
#include "coherency/certify/steady_state.hpp"
#include "coherency/error.hpp"
#include "support.hpp"

namespace coherency::certify {
namespace {

using signals::DisturbanceProfile;
using signals::Term;
using testing::vec;

struct Run {
  testing::Instance inst;
  nodal::SectorBounds bounds;
  DisturbanceProfile profile;
  engine::Trajectory traj;
};

Run steady_step_run(std::uint64_t seed) {
  auto inst = testing::random_instance(seed, 3, 10);
  const auto n = inst.net.bus_count();
  const auto N = static_cast<Eigen::Index>(n);
  const auto b = nodal::sector_bounds(inst.rfs, inst.net.inertia());
  std::mt19937_64 rng(seed + 100);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXd pre(N), step(N);
  for (auto& x : pre) x = 0.2 * U(rng);
  for (auto& x : step) x = U(rng);
  step *= 0.1 * std::abs(U(rng)) / step.norm();
  DisturbanceProfile::StageTerms s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = {Term::constant(pre(static_cast<Eigen::Index>(i))), Term::step(step(static_cast<Eigen::Index>(i)))};
  }
  auto p = DisturbanceProfile::build(n, {0.0}, {s}, pre);
  const auto ss = steady_state_linear(inst.net, inst.rfs, b, pre);
  const engine::InitialState init{ss.theta, Eigen::VectorXd::Constant(N, ss.omega_s), engine::InitKind::Steady};
  engine::IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  const auto times = engine::make_grid(30.0, 0.05, p);
  auto tr = engine::simulate(inst.net, inst.rfs, p, init, engine::Flow::linear(), cfg, times);
  return {std::move(inst), b, std::move(p), std::move(tr)};
}

TEST(Verify, Prop1HoldsOnSteadySteps) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = steady_step_run(seed);
    const auto cert = prop1_certificate(r.inst.net, r.inst.rfs, r.bounds, r.profile, engine::InitKind::Steady);
    const auto rep = verify_bound(r.traj, cert);
    EXPECT_TRUE(rep.holds) << "seed " << seed << " ratio " << rep.worst_ratio;
    EXPECT_EQ(rep.checked, r.traj.sample_count());
    EXPECT_FALSE(rep.fitted_alpha.has_value());
  }
}

TEST(Verify, DetectsUndersizedBound) {
  const auto r = steady_step_run(3);
  auto cert = prop1_certificate(r.inst.net, r.inst.rfs, r.bounds, r.profile, engine::InitKind::Steady);
  cert.segments.front().coeff *= 1e-6;
  const auto rep = verify_bound(r.traj, cert);
  EXPECT_FALSE(rep.holds);
  EXPECT_FALSE(rep.violation_times.empty());
  EXPECT_LT(rep.worst_margin, 0.0);
  EXPECT_GT(rep.worst_ratio, 1.0);
}

TEST(Verify, FitsAlphaWithoutSegments) {
  const auto r = steady_step_run(4);
  auto cert = prop1_certificate(r.inst.net, r.inst.rfs, r.bounds, r.profile, engine::InitKind::Steady);
  cert.segments.clear();
  const auto rep = verify_bound(r.traj, cert);
  ASSERT_TRUE(rep.fitted_alpha.has_value());
  EXPECT_GE(*rep.fitted_alpha, 0.0);
}

TEST(Verify, Guards) {
  const auto r = steady_step_run(2);
  const auto cert = prop1_certificate(r.inst.net, r.inst.rfs, r.bounds, r.profile, engine::InitKind::Steady);
  const auto other = testing::random_instance(99, 3, 10);
  auto foreign = cert;
  foreign.network_fingerprint = other.net.fingerprint();
  auto sinus = cert;
  sinus.flow = engine::Flow::Kind::Sinusoidal;
  auto cold = r.traj;
  cold.init = engine::InitKind::Zero;
  using Pair = std::pair<const engine::Trajectory*, const BoundCertificate*>;
  for (const auto& [tr, c] : {Pair{&r.traj, &foreign}, Pair{&r.traj, &sinus}, Pair{&cold, &cert}}) {
    try {
      verify_bound(*tr, *c);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::AssumptionMismatch);
    }
  }
}

}  // namespace
}  // namespace coherency::certify
