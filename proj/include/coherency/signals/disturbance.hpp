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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coherency/grid/network.hpp"
#include "coherency/nodal/response.hpp"

namespace coherency::signals {

/// One additive primitive of a stage, in stage-local time t' = t - t_s.
struct Term {
  enum class Kind { Constant, Step, Ramp, Sinusoid };
  Kind kind = Kind::Constant;
  double amplitude = 0.0;  // a, h or b
  double rate = 0.0;       // r of a ramp
  double freq = 0.0;       // Omega of a sinusoid
  double phase = 0.0;      // phi of a sinusoid

  static Term constant(double a) { return {Kind::Constant, a}; }
  static Term step(double h) { return {Kind::Step, h}; }
  static Term ramp(double a, double r) { return {Kind::Ramp, a, r}; }
  static Term sinusoid(double b, double omega, double phi = 0.0) {
    return {Kind::Sinusoid, b, 0.0, omega, phi};
  }

  double value(double tl) const noexcept;
  double rate_at(double tl) const noexcept;
  /// sup over t' >= 0 of |d/dt'|
  double rate_sup() const noexcept;
  /// limsup as t' -> infinity of |d/dt'|
  double rate_limsup() const noexcept;
};

/// Which one-sided limit to take at a breakpoint.
enum class Side { None, Left, Right };

struct Sample {
  Eigen::VectorXd xi;
  Eigen::VectorXd rate;
};

/// Piecewise disturbance: stage s covers [t_s, t_{s+1}) with t_0 = 0, the last
/// stage runs forever. `pre` is the constant value for t < 0. Every stage
/// start is a breakpoint; steps can happen only there.
class DisturbanceProfile {
 public:
  using StageTerms = std::vector<std::vector<Term>>;  // [bus][term]

  static DisturbanceProfile build(std::size_t buses, std::vector<double> stage_starts,
                                  std::vector<StageTerms> stages, Eigen::VectorXd pre);
  /// Constant xi for every t (pre-start value included).
  static DisturbanceProfile constant(const Eigen::VectorXd& xi);

  std::size_t bus_count() const noexcept { return buses_; }
  std::size_t stage_count() const noexcept { return starts_.size(); }
  const std::vector<double>& breakpoints() const noexcept { return starts_; }
  double stage_start(std::size_t s) const { return starts_.at(s); }
  double stage_end(std::size_t s) const {
    return s + 1 < starts_.size() ? starts_[s + 1] : std::numeric_limits<double>::infinity();
  }
  const StageTerms& stage(std::size_t s) const { return stages_.at(s); }
  const Eigen::VectorXd& pre() const noexcept { return pre_; }

  bool is_breakpoint(double t) const noexcept;
  /// Stage holding t; at a breakpoint Left picks the earlier stage.
  std::size_t stage_of(double t, Side side = Side::Right) const;

  /// Throws BreakpointEvaluation at a breakpoint when side is None. t < 0
  /// returns the pre-start value with zero rate.
  Sample eval(double t, Side side = Side::None) const;
  /// Evaluates stage s's formulas at absolute time t, including its end.
  Sample eval_in_stage(std::size_t s, double t) const;
  void eval_in_stage(std::size_t s, double t, Eigen::Ref<Eigen::VectorXd> xi,
                     Eigen::Ref<Eigen::VectorXd> rate) const;

  /// True when the last stage has no persistent rate (ramps and constants only).
  bool settles() const noexcept;

 private:
  DisturbanceProfile() = default;

  std::size_t buses_ = 0;
  std::vector<double> starts_;
  std::vector<StageTerms> stages_;
  Eigen::VectorXd pre_;
};

Sample eval_disturbance(const DisturbanceProfile& p, double t, Side side = Side::None);

struct RateStats {
  double C = 0.0;      // sup_{t>0} max_i |xi_i'|/M_i
  double C_lim = 0.0;  // limsup_{t->inf} max_i |xi_i'|/M_i
  std::vector<double> per_stage;  // same sup restricted to each stage
};

/// Closed-form per-primitive sup, triangle sum across primitives, refined by
/// a dense scan (x1.001) when that is tighter.
RateStats rate_stats(const DisturbanceProfile& p, std::span<const double> inertia);

struct Jump {
  Eigen::VectorXd delta;
  double norm = 0.0;
};

/// Right limit minus left limit at a registered breakpoint (NotABreakpoint
/// otherwise). At t = 0 the left limit is the pre-start value.
Jump initial_jump(const DisturbanceProfile& p, double at);

struct AssumptionTwo {
  bool pass = false;
  double margin = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double sup_xi_b = 0.0;   // sup_{t>=0} |xi_b|
  double sup_edge = 0.0;   // sup_{t>=0} max over lines |xi_i - xi_j|
};

/// `baseline` carries B0; the effective sensitivities are k * B0.
AssumptionTwo check_assumption2(const grid::PowerNetwork& baseline, const DisturbanceProfile& p,
                                const nodal::SectorBounds& bounds, double rho, double k);

/// Same, from precomputed sups (used by the rho search).
AssumptionTwo assumption2_from_sups(double sup_xi_b, double sup_edge, double L, double mu,
                                    double max_inertia, double mean_inertia, double lambda2_L,
                                    double rho, double k);

struct ProfileSups {
  double xi_b = 0.0;
  double edge = 0.0;
};
ProfileSups profile_sups(const grid::PowerNetwork& net, const DisturbanceProfile& p);

/// Per-bus parameters of the two-stage profile
///   stage 1 (t < t_switch):  a (1 - exp(-r t))
///   stage 2 (t >= t_switch): a + Delta + b sin(Omega (t - t_switch))
struct TwoStageBus {
  double a = 0.0;
  double r = 0.0;
  double delta = 0.0;
  double b = 0.0;
  double omega = 2.0;
};

struct TwoStageRanges {
  double a_lo = -0.4, a_hi = 0.4;
  double r_lo = 0.05, r_hi = 0.1;
  double delta_lo = -0.04, delta_hi = 0.04;
  double b_lo = 0.0, b_hi = 0.02;
  double omega = 2.0;
  double t_switch = 80.0;
};

std::vector<TwoStageBus> sample_two_stage(std::size_t buses, const TwoStageRanges& ranges,
                                          std::uint64_t seed);
DisturbanceProfile two_stage_profile(std::span<const TwoStageBus> buses, double t_switch);

}  // namespace coherency::signals
