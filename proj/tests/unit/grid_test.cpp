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

#include <algorithm>
#include <random>

#include "coherency/error.hpp"
#include "coherency/grid/network.hpp"
#include "support.hpp"

namespace coherency::grid {
namespace {

using testing::path3;
using testing::triangle;
using testing::two_bus;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

TEST(Spectrum, PathOfThree) {
  const auto s = spectral_summary(path3());
  EXPECT_NEAR(s.lambda2, 1.0, 1e-10);
  EXPECT_NEAR(s.lambda2_L, 1.0, 1e-10);
  EXPECT_NEAR(s.lambdaN, 3.0, 1e-10);
}

TEST(Spectrum, CompleteThree) {
  const auto s = spectral_summary(triangle());
  EXPECT_NEAR(s.lambda2, 3.0, 1e-10);
  EXPECT_NEAR(s.lambdaN, 3.0, 1e-10);
}

TEST(Spectrum, TwoBus) {
  EXPECT_NEAR(spectral_summary(two_bus()).lambda2, 2.0, 1e-10);
  // M = (1, 3), B = 1: eigenvalues of M^-1 L are 0 and 1 + 1/3.
  EXPECT_NEAR(spectral_summary(two_bus(1.0, 3.0)).lambda2, 4.0 / 3.0, 1e-10);
}

TEST(Spectrum, NormAYIsLargestRowNorm) {
  const auto net = random_network({}, 3);
  const auto mats = laplacian_and_incidence(net);
  const auto Y = inertia_basis(net.inertia());
  Eigen::VectorXd inv(static_cast<Eigen::Index>(net.bus_count()));
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = 1.0 / std::sqrt(net.inertia()[static_cast<std::size_t>(i)]);
  const Eigen::MatrixXd ay = mats.incidence.transpose() * inv.asDiagonal() * Y;
  double best = 0.0;
  for (Eigen::Index r = 0; r < ay.rows(); ++r) best = std::max(best, ay.row(r).norm());
  EXPECT_NEAR(spectral_summary(net).norm_AY, best, 1e-12);
}

TEST(Matrices, LaplacianRowsSumToZeroAndMatchIncidence) {
  const auto net = random_network({}, 11);
  const auto m = laplacian_and_incidence(net);
  EXPECT_LT(m.laplacian.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd rebuilt = m.incidence * m.weights.asDiagonal() * m.incidence.transpose();
  EXPECT_LT((rebuilt - m.laplacian).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Matrices, InertiaBasisIsOrthonormalComplement) {
  const std::vector<double> m = {0.5, 2.0, 1.3, 2.9};
  const auto Y = inertia_basis(m);
  ASSERT_EQ(Y.cols(), 3);
  EXPECT_LT((Y.transpose() * Y - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::VectorXd v(4);
  for (int i = 0; i < 4; ++i) v(i) = std::sqrt(m[static_cast<std::size_t>(i)]);
  EXPECT_LT((Y.transpose() * v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Build, RejectsInvalidNetworks) {
  EXPECT_EQ(code_of([] { PowerNetwork::build({1, 1, 1}, {{0, 1, 1}}); }), ErrorCode::DisconnectedGraph);
  EXPECT_EQ(code_of([] { PowerNetwork::build({1, 1}, {{0, 1, 1}, {1, 0, 2}}); }), ErrorCode::DuplicateEdge);
  EXPECT_EQ(code_of([] { PowerNetwork::build({1, 1}, {{0, 1, 1}, {1, 1, 2}}); }), ErrorCode::SelfLoop);
  EXPECT_EQ(code_of([] { PowerNetwork::build({1, 0}, {{0, 1, 1}}); }), ErrorCode::NonPositiveParameter);
  EXPECT_EQ(code_of([] { PowerNetwork::build({1, 1}, {{0, 1, -1}}); }), ErrorCode::NonPositiveParameter);
  EXPECT_EQ(code_of([] { PowerNetwork::build({1, 1}, {{0, 5, 1}}); }), ErrorCode::UnknownBus);
}

TEST(Build, CanonicalOrientation) {
  const auto net = PowerNetwork::build({1, 2}, {{1, 0, 3}});
  EXPECT_EQ(net.lines()[0].from, 0u);
  EXPECT_EQ(net.lines()[0].to, 1u);
}

TEST(Kron, StarToTriangle) {
  const auto star = PowerNetwork::build({1, 1, 1, 1}, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
  const std::vector<std::size_t> keep = {1, 2, 3};
  const auto red = kron_reduce(star, keep);
  ASSERT_EQ(red.line_count(), 3u);
  for (const auto& l : red.lines()) EXPECT_NEAR(l.sensitivity, 1.0 / 3.0, 1e-12);
}

TEST(Kron, DcBoundaryEquivalence) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto net = random_network({8, 6}, seed);
    std::vector<std::size_t> keep = {0, 2, 3, 6};
    const auto red = kron_reduce(net, keep);
    Eigen::VectorXd p = Eigen::VectorXd::Random(4);
    p.array() -= p.mean();
    Eigen::VectorXd full_p = Eigen::VectorXd::Zero(8);
    for (std::size_t i = 0; i < keep.size(); ++i) full_p(static_cast<Eigen::Index>(keep[i])) = p(static_cast<Eigen::Index>(i));
    const Eigen::VectorXd th = laplacian(net).completeOrthogonalDecomposition().solve(full_p);
    const Eigen::VectorXd tr = laplacian(red).completeOrthogonalDecomposition().solve(p);
    for (std::size_t i = 1; i < keep.size(); ++i) {
      const double full_diff = th(static_cast<Eigen::Index>(keep[i])) - th(static_cast<Eigen::Index>(keep[0]));
      EXPECT_NEAR(tr(static_cast<Eigen::Index>(i)) - tr(0), full_diff, 1e-10);
    }
  }
}

TEST(Kron, Errors) {
  const auto net = path3();
  EXPECT_EQ(code_of([&] { kron_reduce(net, std::vector<std::size_t>{}); }), ErrorCode::EmptyKeepSet);
  EXPECT_EQ(code_of([&] { kron_reduce(net, std::vector<std::size_t>{0, 9}); }), ErrorCode::UnknownBus);
}

TEST(Scale, MultipliesSensitivities) {
  const auto net = scale_lines(triangle(), 2.5);
  for (const auto& l : net.lines()) EXPECT_DOUBLE_EQ(l.sensitivity, 2.5);
  EXPECT_NEAR(spectral_summary(net).lambda2, 7.5, 1e-10);
  EXPECT_EQ(code_of([] { scale_lines(triangle(), 0.0); }), ErrorCode::NonPositiveScale);
}

TEST(Random, DeterministicAndConnected) {
  RandomNetworkSpec spec;
  spec.buses = 15;
  spec.extra_edges = 4;
  const auto a = random_network(spec, 42);
  const auto b = random_network(spec, 42);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_EQ(a.line_count(), 18u);
  EXPECT_GT(spectral_summary(a).lambda2_L, 0.0);
  EXPECT_NE(a.fingerprint(), random_network(spec, 43).fingerprint());
  for (const double m : a.inertia()) {
    EXPECT_GE(m, spec.inertia_lo);
    EXPECT_LE(m, spec.inertia_hi);
  }
}

}  // namespace
}  // namespace coherency::grid
