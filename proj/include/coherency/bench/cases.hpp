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
#include <vector>

#include "coherency/bench/run.hpp"
#include "coherency/bench/scenario.hpp"

namespace coherency::bench {

/// Parameters of the bundled 35-bus synthetic grid.
struct SurrogateSpec {
  std::size_t buses = 35;
  std::size_t extra_edges = 60;
  double inertia_lo = 2.0, inertia_hi = 8.0;
  double damping_lo = 1.0, damping_hi = 4.0;
  double saturation = 0.2;
  double sensitivity_lo = 10.0, sensitivity_hi = 40.0;
};

inline constexpr std::uint64_t kSurrogateSeed = 20240611;

grid::PowerNetwork surrogate_network(std::uint64_t seed, const SurrogateSpec& spec = {});
/// Saturated responses f_i(w) = -D_i w - s D_i tanh(w), D_i drawn from SurrogateSpec.
std::vector<nodal::ResponseFunction> surrogate_responses(std::size_t buses, std::uint64_t seed,
                                                         const SurrogateSpec& spec = {});

struct CaseOptions {
  std::optional<std::filesystem::path> grid;  // JSON network or MATPOWER case; surrogate when empty
  std::uint64_t seed = kSurrogateSeed;
  double t_switch = 80.0;
  double t_end = 140.0;
  double dt = 0.05;
  std::filesystem::path out_dir;  // empty: nothing written
  bool fixed_step = false;
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Case 1 baseline, Case 2 (second-stage jumps halved, frequency quartered,
/// oscillation amplitudes doubled) and Case 3 (sensitivities times six).
std::vector<Scenario> case_scenarios(const CaseOptions& opt);

struct CaseComparison {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct CaseSuite {
  std::vector<RunReport> reports;  // Case 1, 2, 3
  std::vector<CaseComparison> comparisons;
  std::string grid_source;
  bool all_pass() const;
};

/// Runs the three cases concurrently and evaluates the cross-case checks.
CaseSuite builtin_cases(const CaseOptions& opt);

nlohmann::json case_suite_json(const CaseSuite& suite);

}  // namespace coherency::bench
