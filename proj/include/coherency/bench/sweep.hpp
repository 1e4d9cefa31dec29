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

#include <string>
#include <vector>

#include "coherency/bench/run.hpp"
#include "coherency/bench/scenario.hpp"

namespace coherency::bench {

enum class SweepParam { Lambda2, K };

SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam p);

/// One scenario per value. Lambda2 rescales every sensitivity so that the
/// second eigenvalue of M^-1 L_B equals the value; K sets the flow gain.
std::vector<Scenario> sweep_scenarios(const Scenario& base, SweepParam param, const std::vector<double>& values);

struct SweepResult {
  std::vector<RunReport> reports;
  std::string csv;  // one row per (scenario, certificate)
};

SweepResult run_sweep(const Scenario& base, SweepParam param, const std::vector<double>& values,
                      std::size_t threads = 0);

}  // namespace coherency::bench
