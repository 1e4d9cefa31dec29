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

#include "coherency/engine/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "coherency/error.hpp"

namespace coherency::engine {

std::string to_string(Flow::Kind kind) {
  return kind == Flow::Kind::Linear ? "linear" : "sinusoidal";
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::Explicit:
      return "explicit";
    case InitKind::Zero:
      return "zero";
    case InitKind::Random:
      return "random";
    case InitKind::Steady:
      return "steady";
  }
  return "explicit";
}

std::vector<double> make_grid(double t_end, double dt, const signals::DisturbanceProfile& p) {
  if (!(t_end > 0.0) || !(dt > 0.0)) throw Error(ErrorCode::GridMismatch, "grid needs t_end > 0 and dt > 0");
  const auto n = static_cast<std::size_t>(std::llround(std::floor(t_end / dt + 1e-9)));
  std::vector<double> grid;
  grid.reserve(n + 2 + p.stage_count());
  for (std::size_t j = 0; j <= n; ++j) grid.push_back(static_cast<double>(j) * dt);
  if (t_end - grid.back() > 1e-9 * t_end) grid.push_back(t_end);
  for (const double b : p.breakpoints()) {
    if (b < t_end) grid.push_back(b);
  }
  std::sort(grid.begin(), grid.end());
  std::vector<double> out;
  for (const double t : grid) {
    if (out.empty() || t - out.back() > 1e-9 * std::max(1.0, t)) {
      out.push_back(t);
    } else if (p.is_breakpoint(t)) {
      out.back() = t;  // keep the exact breakpoint value
    }
  }
  return out;
}

double weighted_mean(std::span<const double> inertia, const Eigen::Ref<const Eigen::VectorXd>& omega) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < inertia.size(); ++i) {
    num += inertia[i] * omega(static_cast<Eigen::Index>(i));
    den += inertia[i];
  }
  return num / den;
}

namespace {

struct Segment {
  std::size_t stage;
  double t0, t1;
  std::size_t first, last;  // sample index range [first, last)
};

// Integration segments split at breakpoints, with the samples each one owns.
std::vector<Segment> segments(const signals::DisturbanceProfile& p, std::span<const double> times) {
  std::vector<Segment> out;
  const double t_end = times.back();
  std::size_t idx = 0;
  for (std::size_t s = 0; s < p.stage_count(); ++s) {
    const double a = p.stage_start(s);
    if (a > t_end) break;
    const double b = std::min(p.stage_end(s), t_end);
    const bool final_segment = b >= t_end;
    const std::size_t first = idx;
    while (idx < times.size() && (times[idx] < b || (final_segment && times[idx] <= b))) ++idx;
    out.push_back({s, a, b, first, idx});
    if (final_segment) break;
  }
  return out;
}

void check_grid(std::span<const double> times) {
  if (times.empty() || times.front() < 0.0) {
    throw Error(ErrorCode::GridMismatch, "output grid must be non-empty and start at t >= 0");
  }
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j] > times[j - 1])) throw Error(ErrorCode::GridMismatch, "output grid must increase");
  }
}

}  // namespace

Trajectory integrate_swing(const grid::PowerNetwork& net, std::span<const nodal::ResponseFunction> rfs,
                           const signals::DisturbanceProfile& p, const InitialState& init, Flow flow,
                           const IntegratorConfig& cfg, std::span<const double> times) {
  const std::size_t n = net.bus_count();
  const auto N = static_cast<Eigen::Index>(n);
  if (rfs.size() != n || p.bus_count() != n || init.theta.size() != N || init.omega.size() != N) {
    throw Error(ErrorCode::DimensionMismatch, "network, responses, profile and initial state sizes differ");
  }
  if (!(flow.k > 0.0)) throw Error(ErrorCode::NonPositiveScale, "flow scale k must be positive");
  check_grid(times);

  const auto& lines = net.lines();
  std::vector<double> w(lines.size());
  for (std::size_t l = 0; l < lines.size(); ++l) w[l] = flow.k * lines[l].sensitivity;
  const auto& inertia = net.inertia();
  Eigen::VectorXd inv_m(N);
  for (Eigen::Index i = 0; i < N; ++i) inv_m(i) = 1.0 / inertia[static_cast<std::size_t>(i)];
  const bool sinusoidal = flow.kind == Flow::Kind::Sinusoidal;

  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.theta.resize(N, static_cast<Eigen::Index>(times.size()));
  traj.omega.resize(N, static_cast<Eigen::Index>(times.size()));
  traj.network_fingerprint = grid::scale_lines(net, flow.k).fingerprint();
  traj.flow = flow;
  traj.init = init.kind;
  traj.rel_tol = cfg.rel_tol;
  traj.abs_tol = cfg.abs_tol;

  Eigen::VectorXd y(2 * N);
  y.head(N) = init.theta;
  y.tail(N) = init.omega;
  Eigen::VectorXd xi(N), rate(N), pe(N);

  IntegrationStats stats;
  for (const auto& seg : segments(p, times)) {
    if (seg.stage > 0) {
      const double bar = weighted_mean(inertia, y.head(N));
      y.head(N).array() -= bar;
      traj.stage_marks.push_back(seg.first);
    }
    const std::size_t s = seg.stage;
    Rhs rhs = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      p.eval_in_stage(s, t, xi, rate);
      pe.setZero();
      for (std::size_t l = 0; l < lines.size(); ++l) {
        const auto a = static_cast<Eigen::Index>(lines[l].from);
        const auto b = static_cast<Eigen::Index>(lines[l].to);
        const double d = x(a) - x(b);
        const double flow_ab = w[l] * (sinusoidal ? std::sin(d) : d);
        pe(a) += flow_ab;
        pe(b) -= flow_ab;
      }
      dx.head(N) = x.tail(N);
      for (Eigen::Index i = 0; i < N; ++i) {
        const double fi = rfs[static_cast<std::size_t>(i)].eval(x(N + i)).value;
        dx(N + i) = inv_m(i) * (fi + xi(i) - pe(i));
      }
    };
    const auto outs = times.subspan(seg.first, seg.last - seg.first);
    Observer obs = [&](std::size_t k, double, const Eigen::VectorXd& state) {
      const auto col = static_cast<Eigen::Index>(seg.first + k);
      traj.theta.col(col) = state.head(N);
      traj.omega.col(col) = state.tail(N);
    };
    y = integrate(rhs, seg.t0, y, seg.t1, outs, obs, cfg, &stats);
  }
  traj.steps = stats.steps;
  return traj;
}

Eigen::VectorXd integrate_blended(std::span<const double> inertia,
                                  std::span<const nodal::ResponseFunction> rfs,
                                  const signals::DisturbanceProfile& p, double omega_b0,
                                  const IntegratorConfig& cfg, std::span<const double> times) {
  const std::size_t n = inertia.size();
  if (rfs.size() != n || p.bus_count() != n) {
    throw Error(ErrorCode::DimensionMismatch, "inertia, responses and profile sizes differ");
  }
  check_grid(times);
  double mb = 0.0;
  for (const double m : inertia) mb += m;
  mb /= static_cast<double>(n);

  Eigen::VectorXd out(static_cast<Eigen::Index>(times.size()));
  Eigen::VectorXd y(1);
  y(0) = omega_b0;
  Eigen::VectorXd xi(static_cast<Eigen::Index>(n)), rate(static_cast<Eigen::Index>(n));
  for (const auto& seg : segments(p, times)) {
    const std::size_t s = seg.stage;
    Rhs rhs = [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      p.eval_in_stage(s, t, xi, rate);
      dx(0) = (nodal::blended_response(rfs, x(0)).value + xi.mean()) / mb;
    };
    const auto outs = times.subspan(seg.first, seg.last - seg.first);
    Observer obs = [&](std::size_t k, double, const Eigen::VectorXd& state) {
      out(static_cast<Eigen::Index>(seg.first + k)) = state(0);
    };
    y = integrate(rhs, seg.t0, y, seg.t1, outs, obs, cfg);
  }
  return out;
}

void derived_traces(Trajectory& traj, const Eigen::VectorXd& omega_b, std::span<const double> inertia) {
  const auto S = static_cast<Eigen::Index>(traj.times.size());
  if (omega_b.size() != S || traj.omega.cols() != S ||
      traj.omega.rows() != static_cast<Eigen::Index>(inertia.size())) {
    throw Error(ErrorCode::GridMismatch, "swing and blended traces are sampled differently");
  }
  traj.omega_b = omega_b;
  traj.omega_coi.resize(S);
  traj.err.resize(S);
  traj.spread.resize(S);
  for (Eigen::Index j = 0; j < S; ++j) {
    const auto col = traj.omega.col(j);
    traj.omega_coi(j) = weighted_mean(inertia, col);
    traj.err(j) = (col.array() - omega_b(j)).abs().maxCoeff();
    traj.spread(j) = col.maxCoeff() - col.minCoeff();
    if (traj.spread(j) > 2.0 * traj.err(j) * (1.0 + 1e-12) + 1e-300) {
      throw Error(ErrorCode::GridMismatch, "pairwise spread exceeds twice the coherence error");
    }
  }
}

Trajectory simulate(const grid::PowerNetwork& net, std::span<const nodal::ResponseFunction> rfs,
                    const signals::DisturbanceProfile& p, const InitialState& init, Flow flow,
                    const IntegratorConfig& cfg, std::span<const double> times) {
  auto traj = integrate_swing(net, rfs, p, init, flow, cfg, times);
  const double wb0 = weighted_mean(net.inertia(), init.omega);
  const auto wb = integrate_blended(net.inertia(), rfs, p, wb0, cfg, times);
  derived_traces(traj, wb, net.inertia());
  return traj;
}

}  // namespace coherency::engine
