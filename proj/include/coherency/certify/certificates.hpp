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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coherency/engine/simulate.hpp"
#include "coherency/grid/network.hpp"
#include "coherency/nodal/response.hpp"
#include "coherency/signals/disturbance.hpp"

namespace coherency::certify {

using NamedValues = std::vector<std::pair<std::string, double>>;

double lookup(const NamedValues& values, std::string_view name);

/// Constants and time-dependent bound on max_i |omega_i - omega_b|^2.
/// The bound is piecewise: each segment contributes coeff * e^{-rate (t - start)}
/// from its start time on, and `floor` is added everywhere.
struct BoundCertificate {
  enum class Kind { T1, P1, T2, P2 };
  struct Segment {
    double start = 0.0;
    double coeff = 0.0;
  };

  Kind kind = Kind::T1;
  NamedValues constants;
  NamedValues provenance;
  std::vector<Segment> segments;
  double rate = 0.0;
  double floor = 0.0;
  double valid_until = std::numeric_limits<double>::infinity();
  std::vector<std::string> failed_conditions;

  std::uint64_t network_fingerprint = 0;  // effective network
  engine::Flow::Kind flow = engine::Flow::Kind::Linear;
  bool requires_steady_init = false;

  double constant(std::string_view name) const { return lookup(constants, name); }
  /// +inf outside [0, valid_until] or before the first segment.
  double bound(double t) const;
  std::string name() const;
};

std::string to_string(BoundCertificate::Kind kind);

struct LinearConstants {
  double K = 0.0;
  double c = 0.0;
  double eta_star = 0.0;
  double limiting_term = 0.0;      // K C^2 (l2 + 4L^2)^2 / l2^3
  double limiting_term_lim = 0.0;  // same with C_lim
  double phi1 = 0.0;
  double phi2 = 0.0;
  double alpha_star = 0.0;
};

LinearConstants linear_constants(double lambda2, double mu, double L, double N, double mean_inertia,
                                 double min_inertia, double C, double C_lim);

struct NonlinearConstants {
  double eta_star = 0.0;
  double c = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double beta = 0.0;
  double V_c = 0.0;
  double C_bar = 0.0;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double Delta_bar = 0.0;
  double alpha_star = 0.0;
  double phi3_offset = 0.0;  // k lambda2_L cos(2 rho) / (8 L max M)
};

/// lambda2, lambdaN from M^-1 L_{B0}; lambda2_L from L_{B0}.
NonlinearConstants nonlinear_constants(double lambda2, double lambdaN, double lambda2_L, double norm_AY,
                                       double mu, double L, double N, double mean_inertia,
                                       double min_inertia, double max_inertia, double k, double rho);

/// Linear flow on `net` (already scaled). alpha comes from V at t = 0+ of
/// `init`; with `traj`, further segments restart at each later breakpoint.
BoundCertificate theorem1_certificate(const grid::PowerNetwork& net,
                                      std::span<const nodal::ResponseFunction> rfs,
                                      const nodal::SectorBounds& bounds, const signals::DisturbanceProfile& p,
                                      const engine::InitialState& init,
                                      const engine::Trajectory* traj = nullptr);

/// Steady start from xi(0-), jump at t = 0. Valid until the next breakpoint.
/// Throws NoSteadyInit unless `init_kind` is Steady.
BoundCertificate prop1_certificate(const grid::PowerNetwork& net, std::span<const nodal::ResponseFunction> rfs,
                                   const nodal::SectorBounds& bounds, const signals::DisturbanceProfile& p,
                                   engine::InitKind init_kind);

/// Sinusoidal flow with sensitivities k * B0 (`baseline` holds B0). Throws
/// AssumptionTwoFailed, RhoOutOfRange. Unmet side conditions (C above C_bar,
/// initial state outside the admissible set) are listed in failed_conditions.
BoundCertificate theorem2_certificate(const grid::PowerNetwork& baseline,
                                      std::span<const nodal::ResponseFunction> rfs,
                                      const nodal::SectorBounds& bounds, const signals::DisturbanceProfile& p,
                                      double k, double rho, const engine::InitialState& init,
                                      const engine::Trajectory* traj = nullptr);

/// Steady start from xi(0-) under sinusoidal flow. Throws NoSteadyInit,
/// AssumptionTwoFailed, JumpTooLarge, RateTooLarge.
BoundCertificate prop2_certificate(const grid::PowerNetwork& baseline,
                                   std::span<const nodal::ResponseFunction> rfs,
                                   const nodal::SectorBounds& bounds, const signals::DisturbanceProfile& p,
                                   double k, double rho, engine::InitKind init_kind);

/// Largest rho on an even grid over (0, pi/4) that passes check_assumption2;
/// nullopt when none does.
std::optional<double> search_rho(const grid::PowerNetwork& baseline, const signals::DisturbanceProfile& p,
                                 const nodal::SectorBounds& bounds, double k, std::size_t grid_points = 64);

struct VerifyReport {
  bool holds = true;
  double worst_margin = std::numeric_limits<double>::infinity();  // min of slack bound - err^2
  double worst_ratio = 0.0;                                       // max err^2 / bound
  std::size_t checked = 0;
  std::vector<double> violation_times;
  std::optional<double> fitted_alpha;
};

/// Checks err(t)^2 <= bound(t) (1 + 1e-6) + 1e-12 at every sample with a
/// finite bound. A certificate without segments gets a fitted alpha: the
/// smallest value making the bound hold at the first sample after t = 0.
/// Throws AssumptionMismatch when the run's network, flow or initial state
/// do not match the certificate.
VerifyReport verify_bound(const engine::Trajectory& traj, const BoundCertificate& cert);

}  // namespace coherency::certify
