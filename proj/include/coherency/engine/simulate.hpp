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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coherency/engine/integrator.hpp"
#include "coherency/grid/network.hpp"
#include "coherency/nodal/response.hpp"
#include "coherency/signals/disturbance.hpp"

namespace coherency::engine {

/// Power flow model. Sinusoidal flow uses k * B on every line; the linear
/// model uses L_{kB}.
struct Flow {
  enum class Kind { Linear, Sinusoidal };
  Kind kind = Kind::Linear;
  double k = 1.0;

  static Flow linear(double k = 1.0) { return {Kind::Linear, k}; }
  static Flow sinusoidal(double k) { return {Kind::Sinusoidal, k}; }
};

std::string to_string(Flow::Kind kind);

/// How the initial state was produced. Certificates that assume a steady
/// start check this tag.
enum class InitKind { Explicit, Zero, Random, Steady };
std::string to_string(InitKind kind);

struct InitialState {
  Eigen::VectorXd theta;
  Eigen::VectorXd omega;
  InitKind kind = InitKind::Explicit;
};

/// Sampled run. Matrices hold one column per sample.
struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd theta;   // N x S
  Eigen::MatrixXd omega;   // N x S
  Eigen::VectorXd omega_b;
  Eigen::VectorXd omega_coi;
  Eigen::VectorXd err;     // max_i |omega_i - omega_b|
  Eigen::VectorXd spread;  // max_{i,j} |omega_i - omega_j|
  std::vector<std::size_t> stage_marks;  // sample index of each breakpoint

  // Provenance used by the bound verifier.
  std::uint64_t network_fingerprint = 0;  // effective (scaled) network
  Flow flow;
  InitKind init = InitKind::Explicit;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  std::size_t steps = 0;

  std::size_t sample_count() const noexcept { return times.size(); }
  std::size_t bus_count() const noexcept { return static_cast<std::size_t>(omega.rows()); }
};

/// Uniform grid 0, dt, 2 dt, ..., t_end merged with every breakpoint below t_end.
std::vector<double> make_grid(double t_end, double dt, const signals::DisturbanceProfile& p);

/// Swing dynamics theta' = omega, M omega' = f(omega) + xi - p_e, restarted at
/// every breakpoint with the right-limit disturbance. theta is re-centred to
/// zero inertia-weighted mean at each breakpoint. Fills times, theta, omega
/// and stage marks.
Trajectory integrate_swing(const grid::PowerNetwork& net, std::span<const nodal::ResponseFunction> rfs,
                           const signals::DisturbanceProfile& p, const InitialState& init, Flow flow,
                           const IntegratorConfig& cfg, std::span<const double> times);

/// Blended dynamics M_b w' = f_b(w) + xi_b on the same grid. Only inertia and
/// nodal responses enter.
Eigen::VectorXd integrate_blended(std::span<const double> inertia,
                                  std::span<const nodal::ResponseFunction> rfs,
                                  const signals::DisturbanceProfile& p, double omega_b0,
                                  const IntegratorConfig& cfg, std::span<const double> times);

/// Inertia-weighted mean of a frequency vector.
double weighted_mean(std::span<const double> inertia, const Eigen::Ref<const Eigen::VectorXd>& omega);

/// Fills omega_b, omega_coi, err and spread. Throws GridMismatch.
void derived_traces(Trajectory& traj, const Eigen::VectorXd& omega_b, std::span<const double> inertia);

/// Swing plus blended run plus derived traces.
Trajectory simulate(const grid::PowerNetwork& net, std::span<const nodal::ResponseFunction> rfs,
                    const signals::DisturbanceProfile& p, const InitialState& init, Flow flow,
                    const IntegratorConfig& cfg, std::span<const double> times);

}  // namespace coherency::engine
