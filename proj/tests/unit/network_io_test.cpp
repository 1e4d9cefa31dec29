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

#include <filesystem>
#include <fstream>

#include "coherency/error.hpp"
#include "coherency/grid/network_io.hpp"

namespace coherency::grid {
namespace {

constexpr const char* kCase = R"(function mpc = tiny
% three buses, one doubled branch, one branch out of service
mpc.baseMVA = 100;
mpc.bus = [
  1 3 0 0 0 0 1 1 0 230 1 1.1 0.9;
  2 1 0 0 0 0 1 1 0 230 1 1.1 0.9;
  5 2 0 0 0 0 1 1 0 230 1 1.1 0.9;
];
mpc.gen = [
  1 0 0 300 -300 1 100 1 250 10;
  5 0 0 300 -300 1 100 1 250 10;
];
mpc.branch = [
  1 2 0.01 0.5 0.02 250 250 250 0 0 1 -360 360;
  1 2 0    0.5 0    250 250 250 0 0 1 -360 360;
  2 5 0    0.25 0   250 250 250 0.98 0 1 -360 360;
  1 5 0    0.1 0    250 250 250 0 0 0 -360 360;
];
)";

TEST(Json, RoundTrip) {
  const auto net = PowerNetwork::build({1.5, 2.0, 0.7}, {{0, 1, 1.25}, {1, 2, 0.5}}, {10, 20, 30});
  const auto back = network_from_json(network_to_json(net));
  EXPECT_EQ(back.fingerprint(), net.fingerprint());
  EXPECT_EQ(back.ids(), net.ids());
}

TEST(Json, UnknownLineEndpoint) {
  const auto doc = nlohmann::json::parse(R"({"buses":[{"id":1,"M":1},{"id":2,"M":1},{"id":3,"M":1}],
                                           "lines":[{"from":1,"to":7,"B":1}]})");
  try {
    network_from_json(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
  }
}

TEST(Json, FileRoundTripAndMissingFile) {
  const auto dir = std::filesystem::temp_directory_path() / "coherency_io_test";
  std::filesystem::create_directories(dir);
  const auto net = PowerNetwork::build({1, 2}, {{0, 1, 3}});
  save_network_json(net, dir / "n.json");
  EXPECT_EQ(load_network_json(dir / "n.json").fingerprint(), net.fingerprint());
  try {
    load_network_json(dir / "absent.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingFile);
  }
}

TEST(Matpower, ParsesSubset) {
  const auto mc = parse_matpower(kCase);
  EXPECT_EQ(mc.bus_ids, (std::vector<long>{1, 2, 5}));
  EXPECT_EQ(mc.gen_buses, (std::vector<long>{1, 5}));
  ASSERT_EQ(mc.branches.size(), 2u);
  EXPECT_NEAR(mc.branches[0].B, 4.0, 1e-12);  // two parallel x = 0.5
  EXPECT_NEAR(mc.branches[1].B, 4.0, 1e-12);
  EXPECT_EQ(mc.warnings.size(), 4u);  // resistance, charging, taps, out of service
}

TEST(Matpower, BuildsNetwork) {
  const auto net = matpower_network(parse_matpower(kCase), 5.0, {{2, 3.0}});
  EXPECT_EQ(net.bus_count(), 3u);
  EXPECT_DOUBLE_EQ(net.inertia()[1], 3.0);
  EXPECT_DOUBLE_EQ(net.inertia()[2], 5.0);
  EXPECT_EQ(net.index_of(5), 2u);
}

}  // namespace
}  // namespace coherency::grid
