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

#include "coherency/signals/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "coherency/error.hpp"

namespace coherency::signals {

double Term::value(double tl) const noexcept {
  switch (kind) {
    case Kind::Constant:
    case Kind::Step:
      return amplitude;
    case Kind::Ramp:
      return -amplitude * std::expm1(-rate * tl);
    case Kind::Sinusoid:
      return amplitude * std::sin(freq * tl + phase);
  }
  return 0.0;
}

double Term::rate_at(double tl) const noexcept {
  switch (kind) {
    case Kind::Constant:
    case Kind::Step:
      return 0.0;
    case Kind::Ramp:
      return amplitude * rate * std::exp(-rate * tl);
    case Kind::Sinusoid:
      return amplitude * freq * std::cos(freq * tl + phase);
  }
  return 0.0;
}

double Term::rate_sup() const noexcept {
  switch (kind) {
    case Kind::Constant:
    case Kind::Step:
      return 0.0;
    case Kind::Ramp:
      return std::abs(amplitude * rate);
    case Kind::Sinusoid:
      return std::abs(amplitude * freq);
  }
  return 0.0;
}

double Term::rate_limsup() const noexcept {
  return kind == Kind::Sinusoid ? std::abs(amplitude * freq) : 0.0;
}

DisturbanceProfile DisturbanceProfile::build(std::size_t buses, std::vector<double> stage_starts,
                                             std::vector<StageTerms> stages, Eigen::VectorXd pre) {
  if (buses == 0) throw Error(ErrorCode::InvalidProfile, "profile needs at least one bus");
  if (stage_starts.empty() || stage_starts.front() != 0.0) {
    throw Error(ErrorCode::InvalidProfile, "the first stage must start at t = 0");
  }
  if (stages.size() != stage_starts.size()) {
    throw Error(ErrorCode::InvalidProfile, "one term list per stage start is required");
  }
  for (std::size_t s = 1; s < stage_starts.size(); ++s) {
    if (!(stage_starts[s] > stage_starts[s - 1]) || !std::isfinite(stage_starts[s])) {
      throw Error(ErrorCode::InvalidProfile, "stage starts must be finite and strictly increasing");
    }
  }
  if (pre.size() != static_cast<Eigen::Index>(buses)) {
    throw Error(ErrorCode::InvalidProfile, "pre-start value has the wrong length");
  }
  for (const auto& st : stages) {
    if (st.size() != buses) throw Error(ErrorCode::InvalidProfile, "stage terms must list every bus");
    for (const auto& bus : st) {
      for (const auto& term : bus) {
        const bool finite = std::isfinite(term.amplitude) && std::isfinite(term.rate) &&
                            std::isfinite(term.freq) && std::isfinite(term.phase);
        if (!finite) throw Error(ErrorCode::InvalidProfile, "term parameters must be finite");
        if (term.kind == Term::Kind::Ramp && !(term.rate > 0.0)) {
          throw Error(ErrorCode::InvalidProfile, "ramp rate must be positive");
        }
      }
    }
  }
  DisturbanceProfile p;
  p.buses_ = buses;
  p.starts_ = std::move(stage_starts);
  p.stages_ = std::move(stages);
  p.pre_ = std::move(pre);
  return p;
}

DisturbanceProfile DisturbanceProfile::constant(const Eigen::VectorXd& xi) {
  const auto n = static_cast<std::size_t>(xi.size());
  StageTerms terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i].push_back(Term::constant(xi(static_cast<Eigen::Index>(i))));
  return build(n, {0.0}, {terms}, xi);
}

bool DisturbanceProfile::is_breakpoint(double t) const noexcept {
  return std::any_of(starts_.begin(), starts_.end(), [t](double s) {
    return std::abs(t - s) <= 1e-12 * std::max(1.0, std::abs(s));
  });
}

std::size_t DisturbanceProfile::stage_of(double t, Side side) const {
  std::size_t s = 0;
  for (std::size_t k = 1; k < starts_.size(); ++k) {
    const double tol = 1e-12 * std::max(1.0, std::abs(starts_[k]));
    if (t > starts_[k] + tol || (std::abs(t - starts_[k]) <= tol && side != Side::Left)) s = k;
  }
  return s;
}

void DisturbanceProfile::eval_in_stage(std::size_t s, double t, Eigen::Ref<Eigen::VectorXd> xi,
                                       Eigen::Ref<Eigen::VectorXd> rate) const {
  const auto& st = stages_.at(s);
  const double tl = t - starts_[s];
  for (std::size_t i = 0; i < buses_; ++i) {
    double v = 0.0, r = 0.0;
    for (const auto& term : st[i]) {
      v += term.value(tl);
      r += term.rate_at(tl);
    }
    xi(static_cast<Eigen::Index>(i)) = v;
    rate(static_cast<Eigen::Index>(i)) = r;
  }
}

Sample DisturbanceProfile::eval_in_stage(std::size_t s, double t) const {
  Sample out{Eigen::VectorXd(static_cast<Eigen::Index>(buses_)),
             Eigen::VectorXd(static_cast<Eigen::Index>(buses_))};
  eval_in_stage(s, t, out.xi, out.rate);
  return out;
}

Sample DisturbanceProfile::eval(double t, Side side) const {
  const auto n = static_cast<Eigen::Index>(buses_);
  if (is_breakpoint(t)) {
    if (side == Side::None) {
      throw Error(ErrorCode::BreakpointEvaluation,
                  "t = " + std::to_string(t) + " is a breakpoint; request a one-sided limit");
    }
    const std::size_t s = stage_of(t, Side::Right);
    if (side == Side::Left) {
      if (s == 0) return {pre_, Eigen::VectorXd::Zero(n)};
      return eval_in_stage(s - 1, t);
    }
    return eval_in_stage(s, t);
  }
  if (t < 0.0) return {pre_, Eigen::VectorXd::Zero(n)};
  return eval_in_stage(stage_of(t), t);
}

bool DisturbanceProfile::settles() const noexcept {
  for (const auto& bus : stages_.back()) {
    for (const auto& term : bus) {
      if (term.rate_limsup() > 0.0) return false;
    }
  }
  return true;
}

Sample eval_disturbance(const DisturbanceProfile& p, double t, Side side) { return p.eval(t, side); }

namespace {

// Stage-local scan points. Infinite stages are scanned until ramps have
// decayed; point density resolves the fastest sinusoid.
std::vector<double> scan_points(const DisturbanceProfile& p, std::size_t s) {
  double slow_rate = std::numeric_limits<double>::infinity();
  double fast_freq = 0.0;
  for (const auto& bus : p.stage(s)) {
    for (const auto& term : bus) {
      if (term.kind == Term::Kind::Ramp) slow_rate = std::min(slow_rate, term.rate);
      if (term.kind == Term::Kind::Sinusoid) fast_freq = std::max(fast_freq, std::abs(term.freq));
    }
  }
  double span = p.stage_end(s) - p.stage_start(s);
  if (!std::isfinite(span)) {
    span = 1.0;
    if (std::isfinite(slow_rate)) span = std::max(span, 40.0 / slow_rate);
    if (fast_freq > 0.0) span = std::max(span, 4.0 * std::numbers::pi / fast_freq);
  }
  std::size_t count = 10000;
  if (fast_freq > 0.0) {
    const double periods = span * fast_freq / (2.0 * std::numbers::pi);
    count = std::max(count, static_cast<std::size_t>(200.0 * periods) + 1);
  }
  count = std::min<std::size_t>(count, 2000000);
  std::vector<double> pts(count);
  for (std::size_t j = 0; j < count; ++j) {
    pts[j] = span * static_cast<double>(j) / static_cast<double>(count - 1);
  }
  return pts;
}

bool has_varying_terms(const std::vector<Term>& terms) {
  std::size_t varying = 0;
  for (const auto& t : terms) {
    if (t.kind == Term::Kind::Ramp || t.kind == Term::Kind::Sinusoid) ++varying;
  }
  return varying > 1;
}

}  // namespace

RateStats rate_stats(const DisturbanceProfile& p, std::span<const double> inertia) {
  const std::size_t n = p.bus_count();
  if (inertia.size() != n) throw Error(ErrorCode::DimensionMismatch, "inertia length differs from profile");
  RateStats out;
  out.per_stage.assign(p.stage_count(), 0.0);
  for (std::size_t s = 0; s < p.stage_count(); ++s) {
    std::vector<double> pts;
    double stage_sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& terms = p.stage(s)[i];
      double tri = 0.0;
      for (const auto& t : terms) tri += t.rate_sup();
      double sup = tri;
      if (has_varying_terms(terms)) {
        if (pts.empty()) pts = scan_points(p, s);
        double scan = 0.0;
        for (const double tl : pts) {
          double r = 0.0;
          for (const auto& t : terms) r += t.rate_at(tl);
          scan = std::max(scan, std::abs(r));
        }
        sup = std::min(tri, 1.001 * scan);
      }
      stage_sup = std::max(stage_sup, sup / inertia[i]);
    }
    out.per_stage[s] = stage_sup;
    out.C = std::max(out.C, stage_sup);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double lim = 0.0;
    for (const auto& t : p.stage(p.stage_count() - 1)[i]) lim += t.rate_limsup();
    out.C_lim = std::max(out.C_lim, lim / inertia[i]);
  }
  out.C_lim = std::min(out.C_lim, out.C);
  return out;
}

Jump initial_jump(const DisturbanceProfile& p, double at) {
  if (!p.is_breakpoint(at)) {
    throw Error(ErrorCode::NotABreakpoint, "t = " + std::to_string(at) + " is not a breakpoint");
  }
  Jump j;
  j.delta = p.eval(at, Side::Right).xi - p.eval(at, Side::Left).xi;
  j.norm = j.delta.norm();
  return j;
}

ProfileSups profile_sups(const grid::PowerNetwork& net, const DisturbanceProfile& p) {
  const std::size_t n = p.bus_count();
  if (net.bus_count() != n) throw Error(ErrorCode::DimensionMismatch, "network and profile sizes differ");
  ProfileSups out;
  for (std::size_t s = 0; s < p.stage_count(); ++s) {
    // Triangle bounds: constant part exact, varying part by amplitude.
    std::vector<double> level(n, 0.0), spread(n, 0.0);
    bool varying = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& t : p.stage(s)[i]) {
        if (t.kind == Term::Kind::Constant || t.kind == Term::Kind::Step) {
          level[i] += t.amplitude;
        } else {
          spread[i] += std::abs(t.amplitude);
          varying = true;
        }
      }
    }
    double tri_b = 0.0, tri_edge = 0.0;
    {
      double lsum = 0.0, ssum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        lsum += level[i];
        ssum += spread[i];
      }
      tri_b = std::abs(lsum) / static_cast<double>(n) + ssum / static_cast<double>(n);
      for (const auto& l : net.lines()) {
        tri_edge = std::max(tri_edge, std::abs(level[l.from] - level[l.to]) + spread[l.from] + spread[l.to]);
      }
    }
    if (!varying) {
      out.xi_b = std::max(out.xi_b, tri_b);
      out.edge = std::max(out.edge, tri_edge);
      continue;
    }
    const auto pts = scan_points(p, s);
    Eigen::VectorXd xi(static_cast<Eigen::Index>(n)), rate(static_cast<Eigen::Index>(n));
    double scan_b = 0.0, scan_edge = 0.0;
    auto visit = [&](double tl) {
      p.eval_in_stage(s, p.stage_start(s) + tl, xi, rate);
      scan_b = std::max(scan_b, std::abs(xi.mean()));
      for (const auto& l : net.lines()) {
        scan_edge = std::max(scan_edge, std::abs(xi(static_cast<Eigen::Index>(l.from)) -
                                                 xi(static_cast<Eigen::Index>(l.to))));
      }
    };
    for (const double tl : pts) visit(tl);
    if (!std::isfinite(p.stage_end(s))) visit(1e12);
    out.xi_b = std::max(out.xi_b, std::min(tri_b, 1.001 * scan_b));
    out.edge = std::max(out.edge, std::min(tri_edge, 1.001 * scan_edge));
  }
  return out;
}

AssumptionTwo assumption2_from_sups(double sup_xi_b, double sup_edge, double L, double mu,
                                    double max_inertia, double mean_inertia, double lambda2_L,
                                    double rho, double k) {
  if (!(rho > 0.0 && rho < std::numbers::pi / 4.0)) {
    throw Error(ErrorCode::RhoOutOfRange, "rho must lie in (0, pi/4)");
  }
  if (!(k > 0.0)) throw Error(ErrorCode::NonPositiveScale, "k must be positive");
  AssumptionTwo a;
  a.sup_xi_b = sup_xi_b;
  a.sup_edge = sup_edge;
  a.lhs = 12.0 * L * max_inertia * sup_xi_b / (mu * mean_inertia) + 2.0 * sup_edge;
  a.rhs = k * lambda2_L * std::cos(2.0 * rho);
  a.margin = a.rhs - a.lhs;
  a.pass = a.lhs <= a.rhs;
  return a;
}

AssumptionTwo check_assumption2(const grid::PowerNetwork& baseline, const DisturbanceProfile& p,
                                const nodal::SectorBounds& bounds, double rho, double k) {
  const auto sups = profile_sups(baseline, p);
  const auto spec = grid::spectral_summary(baseline);
  return assumption2_from_sups(sups.xi_b, sups.edge, bounds.L, bounds.mu, baseline.max_inertia(),
                               baseline.mean_inertia(), spec.lambda2_L, rho, k);
}

std::vector<TwoStageBus> sample_two_stage(std::size_t buses, const TwoStageRanges& ranges,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  std::vector<TwoStageBus> out(buses);
  for (auto& b : out) {
    b.a = uniform(ranges.a_lo, ranges.a_hi);
    b.r = uniform(ranges.r_lo, ranges.r_hi);
    b.delta = uniform(ranges.delta_lo, ranges.delta_hi);
    b.b = uniform(ranges.b_lo, ranges.b_hi);
    b.omega = ranges.omega;
  }
  return out;
}

DisturbanceProfile two_stage_profile(std::span<const TwoStageBus> buses, double t_switch) {
  const std::size_t n = buses.size();
  DisturbanceProfile::StageTerms first(n), second(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = buses[i];
    first[i] = {Term::ramp(b.a, b.r)};
    second[i] = {Term::constant(b.a), Term::step(b.delta), Term::sinusoid(b.b, b.omega)};
  }
  return DisturbanceProfile::build(n, {0.0, t_switch}, {first, second},
                                   Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
}

}  // namespace coherency::signals
