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

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

#include <Eigen/Dense>

namespace coherency::engine {

struct IntegratorConfig {
  enum class Method { DormandPrince45, RK4 };
  Method method = Method::DormandPrince45;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double fixed_step = 1e-3;  // RK4 only
};

using Rhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;
using Observer = std::function<void(std::size_t, double, const Eigen::VectorXd&)>;

struct IntegrationStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t rhs_calls = 0;
};

/// Integrates y' = rhs(t, y) from t0 to t1 and calls `observe(k, t, y)` for
/// every output time in `outputs` (sorted, within [t0, t1]). The adaptive
/// method interpolates with its 4th-order dense output; RK4 takes equal
/// substeps of at most `fixed_step` between consecutive outputs. Returns the
/// state at t1. Throws StepSizeUnderflow or NonFiniteState.
Eigen::VectorXd integrate(const Rhs& rhs, double t0, Eigen::VectorXd y0, double t1,
                          std::span<const double> outputs, const Observer& observe,
                          const IntegratorConfig& cfg, IntegrationStats* stats = nullptr);

}  // namespace coherency::engine
