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

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "coherency/grid/network.hpp"
#include "coherency/nodal/response.hpp"
#include "coherency/signals/disturbance.hpp"

namespace coherency::testing {

inline grid::PowerNetwork two_bus(double m1 = 1.0, double m2 = 1.0, double b = 1.0) {
  return grid::PowerNetwork::build({m1, m2}, {{0, 1, b}});
}

inline grid::PowerNetwork path3() { return grid::PowerNetwork::build({1, 1, 1}, {{0, 1, 1}, {1, 2, 1}}); }

inline grid::PowerNetwork triangle() {
  return grid::PowerNetwork::build({1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
}

inline std::vector<nodal::ResponseFunction> linear_responses(const std::vector<double>& d) {
  std::vector<nodal::ResponseFunction> out;
  for (const double x : d) out.push_back(nodal::ResponseFunction::linear(x));
  return out;
}

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const double x : xs) v(i++) = x;
  return v;
}

/// Random connected network with N in [lo, hi] buses and matching linear damping.
struct Instance {
  grid::PowerNetwork net;
  std::vector<nodal::ResponseFunction> rfs;
};

inline Instance random_instance(std::uint64_t seed, std::size_t lo = 3, std::size_t hi = 12) {
  std::mt19937_64 rng(seed * 7919 + 17);
  std::uniform_int_distribution<std::size_t> nd(lo, hi);
  grid::RandomNetworkSpec spec;
  spec.buses = nd(rng);
  spec.extra_edges = std::uniform_int_distribution<std::size_t>(0, spec.buses)(rng);
  auto net = grid::random_network(spec, seed);
  std::uniform_real_distribution<double> D(0.5, 2.0);
  std::vector<nodal::ResponseFunction> rfs;
  for (std::size_t i = 0; i < net.bus_count(); ++i) rfs.push_back(nodal::ResponseFunction::linear(D(rng)));
  return {std::move(net), std::move(rfs)};
}

}  // namespace coherency::testing
