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
#include <iosfwd>

#include "coherency/engine/simulate.hpp"

namespace coherency::engine {

/// CSV with header `t,omega_1..omega_N,omega_b,omega_coi,err[,theta_1..theta_N]`,
/// values printed with 17 significant digits. Stage marks and run metadata
/// are `#` comment lines ahead of the header.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, bool with_angles = true);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          bool with_angles = true);

/// Inverse of write_trajectory_csv. Angles are zero-filled when absent.
Trajectory read_trajectory_csv(std::istream& in);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

}  // namespace coherency::engine
