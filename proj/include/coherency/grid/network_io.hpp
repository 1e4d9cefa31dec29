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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coherency/grid/network.hpp"
#include "json.hpp"

namespace coherency::grid {

/// `{"buses": [{"id": 1, "M": 2.0}, ...], "lines": [{"from": 1, "to": 2, "B": 1.5}, ...]}`
/// with optional `"baseline": true`. Line endpoints refer to bus ids.
PowerNetwork network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const PowerNetwork& net);

PowerNetwork load_network_json(const std::filesystem::path& path);
void save_network_json(const PowerNetwork& net, const std::filesystem::path& path);

/// The subset of a MATPOWER case this loader understands: bus ids, generator
/// buses and in-service branches with B = 1/x (unit voltage magnitudes).
/// Parallel branches are merged by summing B. Resistance, charging, tap
/// ratios and phase shifts are ignored; each kind is reported once in
/// `warnings`.
struct MatpowerCase {
  std::vector<long> bus_ids;
  std::vector<long> gen_buses;
  struct Branch {
    long from = 0;
    long to = 0;
    double B = 0.0;
  };
  std::vector<Branch> branches;
  std::vector<std::string> warnings;
};

MatpowerCase parse_matpower(std::string_view text);
MatpowerCase read_matpower(const std::filesystem::path& path);

/// Builds the network over all case buses. Inertia is not part of the
/// MATPOWER format: `inertia` maps bus id to M, other buses get
/// `default_inertia`.
PowerNetwork matpower_network(const MatpowerCase& mc, double default_inertia,
                              const std::map<long, double>& inertia = {});

}  // namespace coherency::grid
