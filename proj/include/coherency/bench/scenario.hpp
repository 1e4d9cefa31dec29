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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "coherency/certify/certificates.hpp"
#include "coherency/engine/integrator.hpp"
#include "coherency/engine/simulate.hpp"
#include "coherency/grid/network.hpp"
#include "coherency/nodal/response.hpp"
#include "coherency/signals/disturbance.hpp"

namespace coherency::bench {

struct InitSpec {
  engine::InitKind kind = engine::InitKind::Zero;
  double spread = 1e-3;  // Random: theta, omega ~ U(-spread, spread)
  std::uint64_t seed = 0;
  Eigen::VectorXd theta;  // Explicit
  Eigen::VectorXd omega;
};

/// A fully resolved experiment. `network` and `profile` are always set by
/// the loader; they are optional only because neither type has an empty state.
struct Scenario {
  std::string name = "scenario";
  std::string network_source;  // "inline", "file:<path>", "matpower:<path>", "random", "surrogate-35"
  std::optional<grid::PowerNetwork> network;  // B0 when the flow scales by k
  std::vector<nodal::ResponseFunction> responses;
  std::optional<signals::DisturbanceProfile> profile;
  engine::Flow flow;
  std::optional<double> rho;  // empty: automatic search
  double sector_lo = -10.0;
  double sector_hi = 10.0;
  InitSpec init;
  engine::IntegratorConfig integrator;
  double t_end = 100.0;
  double dt = 0.01;
  std::vector<certify::BoundCertificate::Kind> certificates;
  std::filesystem::path out_dir;
  bool write_angles = true;
  std::uint64_t seed = 0;
  nlohmann::json source;  // canonical document the scenario was built from
  std::uint64_t hash = 0;

  const grid::PowerNetwork& net() const { return network.value(); }
  const signals::DisturbanceProfile& disturbance() const { return profile.value(); }
};

/// Builds a scenario from a parsed document; relative file references are
/// resolved against `base_dir`. Throws SchemaViolation, MissingFile and the
/// construction errors of the referenced objects.
Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Throws ParseError (with line and column), SchemaViolation, MissingFile.
Scenario load_scenario(const std::filesystem::path& path);

/// Parses `text` as a scenario document; ParseError carries line and column.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});

/// FNV-1a over the canonical document and the resolved network.
std::uint64_t scenario_hash(const Scenario& s);

/// Initial state requested by the scenario; steady starts solve for the
/// equilibrium under the pre-start disturbance.
engine::InitialState make_initial_state(const Scenario& s, const nodal::SectorBounds& bounds, double rho);

}  // namespace coherency::bench
