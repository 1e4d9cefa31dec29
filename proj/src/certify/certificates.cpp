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

#include "coherency/certify/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "coherency/certify/frame.hpp"
#include "coherency/engine/lyapunov.hpp"
#include "coherency/error.hpp"

namespace coherency::certify {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

constexpr double kQuarterPi = M_PI / 4.0;

double sq(double x) { return x * x; }

/// |f_b(w_b) + xi_b| for the blended model.
double blended_force(std::span<const nodal::ResponseFunction> rfs, double omega_b, const Eigen::VectorXd& xi) {
  return std::abs(nodal::blended_response(rfs, omega_b).value + xi.mean());
}

void check_sizes(const grid::PowerNetwork& net, std::span<const nodal::ResponseFunction> rfs,
                 const signals::DisturbanceProfile& p) {
  if (rfs.size() != net.bus_count() || p.bus_count() != net.bus_count()) {
    throw Error(ErrorCode::DimensionMismatch, "network, responses and profile disagree on the bus count");
  }
}

void check_rho(double rho) {
  if (!(rho > 0.0 && rho < kQuarterPi)) {
    throw Error(ErrorCode::RhoOutOfRange, "rho must lie in (0, pi/4), got " + num(rho));
  }
}

bool has_state(const engine::InitialState& init, std::size_t n) {
  return static_cast<std::size_t>(init.theta.size()) == n && static_cast<std::size_t>(init.omega.size()) == n;
}

/// Sample indices that open each stage after the first, paired with the stage.
std::vector<std::pair<std::size_t, std::size_t>> later_openings(const engine::Trajectory& traj,
                                                                const signals::DisturbanceProfile& p) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto idx : traj.stage_marks) {
    const double t = traj.times.at(idx);
    if (t <= 0.0) continue;
    out.emplace_back(idx, p.stage_of(t, signals::Side::Right));
  }
  return out;
}

double next_breakpoint(const signals::DisturbanceProfile& p) {
  return p.stage_count() > 1 ? p.stage_start(1) : std::numeric_limits<double>::infinity();
}

}  // namespace

double lookup(const NamedValues& values, std::string_view name) {
  for (const auto& [key, value] : values) {
    if (key == name) return value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double BoundCertificate::bound(double t) const {
  const auto inf = std::numeric_limits<double>::infinity();
  if (t < 0.0 || t > valid_until || segments.empty() || t + 1e-12 < segments.front().start) return inf;
  const Segment* seg = &segments.front();
  for (const auto& s : segments) {
    if (s.start <= t + 1e-12) seg = &s;
  }
  return seg->coeff * std::exp(-rate * std::max(0.0, t - seg->start)) + floor;
}

std::string to_string(BoundCertificate::Kind kind) {
  switch (kind) {
    case BoundCertificate::Kind::T1: return "T1";
    case BoundCertificate::Kind::P1: return "P1";
    case BoundCertificate::Kind::T2: return "T2";
    case BoundCertificate::Kind::P2: return "P2";
  }
  return "?";
}

std::string BoundCertificate::name() const { return to_string(kind); }

LinearConstants linear_constants(double lambda2, double mu, double L, double N, double mean_inertia,
                                 double min_inertia, double C, double C_lim) {
  LinearConstants k;
  const double gain = sq(1.0 + L / mu);
  k.K = 32.0 * N * mean_inertia * gain / (min_inertia * mu * mu);
  k.eta_star = mu * lambda2 / (2.0 * (lambda2 + 4.0 * L * L));
  k.c = k.eta_star / 2.0;
  const double shape = sq(lambda2 + 4.0 * L * L) / (lambda2 * lambda2 * lambda2);
  k.limiting_term = k.K * C * C * shape;
  k.limiting_term_lim = k.K * C_lim * C_lim * shape;
  k.phi1 = 1.0 / sq(min_inertia);
  k.phi2 = 16.0 * L * L / (3.0 * mu * mu * mean_inertia * min_inertia);
  k.alpha_star = ((k.phi1 + k.phi2) * lambda2 + 4.0 * k.phi2 * L * L) / sq(lambda2);
  return k;
}

NonlinearConstants nonlinear_constants(double lambda2, double lambdaN, double lambda2_L, double norm_AY,
                                       double mu, double L, double N, double mean_inertia,
                                       double min_inertia, double max_inertia, double k, double rho) {
  NonlinearConstants n;
  const double s = std::sin(rho);
  const double curv = lambda2 * lambda2 * s * s;  // lambda2^2 sin^2 rho
  n.eta_star = 1.0 / ((2.0 * lambdaN / mu) * (1.0 + 2.0 * lambdaN * L * L / (k * curv)) +
                      std::sqrt(2.0 * lambdaN * lambdaN / (k * lambda2 * s)));
  n.c = n.eta_star * curv / (lambdaN + lambda2 * s);
  n.phi1 = 1.0 / (k * n.eta_star * curv);
  n.phi2 = n.eta_star * curv / (4.0 * k * lambdaN * lambdaN * L * L);
  const double phi = n.phi1 + n.phi2;
  const double gain = sq(1.0 + L / mu);
  n.beta = 8.0 * phi * N * mean_inertia * gain / (n.c * min_inertia);
  const double coercive = k * lambda2 * s - sq(n.eta_star * lambdaN);
  n.V_c = coercive * rho * rho / (2.0 * norm_AY * norm_AY);
  n.C_bar = std::sqrt(n.c * rho * rho * coercive / (4.0 * N * mean_inertia * gain * norm_AY * norm_AY * phi));
  n.zeta1 = lambdaN / (2.0 * k * min_inertia * sq(s * lambda2)) + 2.0 * L * L * phi / (mean_inertia * mu);
  n.zeta2 = k * lambda2_L * std::cos(2.0 * rho) * mu * mean_inertia / (8.0 * L * max_inertia);
  n.Delta_bar = std::min(std::sqrt(n.V_c / n.zeta1), std::sqrt(N) * n.zeta2);
  n.alpha_star = 4.0 * n.zeta1 / min_inertia;
  n.phi3_offset = k * lambda2_L * std::cos(2.0 * rho) / (8.0 * L * max_inertia);
  return n;
}

BoundCertificate theorem1_certificate(const grid::PowerNetwork& net,
                                      std::span<const nodal::ResponseFunction> rfs,
                                      const nodal::SectorBounds& bounds, const signals::DisturbanceProfile& p,
                                      const engine::InitialState& init, const engine::Trajectory* traj) {
  check_sizes(net, rfs, p);
  const auto frame = TransformedFrame::build(net);
  const double N = static_cast<double>(net.bus_count());
  const double mb = net.mean_inertia();
  const double minM = net.min_inertia();
  const auto rs = signals::rate_stats(p, net.inertia());
  const auto lc = linear_constants(frame.sigma_m, bounds.mu, bounds.L, N, mb, minM, rs.C, rs.C_lim);

  BoundCertificate cert;
  cert.kind = BoundCertificate::Kind::T1;
  cert.network_fingerprint = net.fingerprint();
  cert.flow = engine::Flow::Kind::Linear;
  cert.rate = lc.c;
  cert.floor = lc.limiting_term;
  cert.constants = {{"K", lc.K},
                    {"c", lc.c},
                    {"eta_star", lc.eta_star},
                    {"limiting_term", lc.limiting_term},
                    {"limiting_term_lim", lc.limiting_term_lim}};
  cert.provenance = {{"lambda2", frame.sigma_m}, {"mu", bounds.mu}, {"L", bounds.L},
                     {"C", rs.C},                {"C_lim", rs.C_lim}, {"N", N}};

  // alpha = (2 / min M) (V(t_s+) + 2 beta1 / (3 mu)) for a start at t_s.
  auto segment_coeff = [&](double t_s, std::size_t stage, const Eigen::VectorXd& theta,
                           const Eigen::VectorXd& omega, double omega_b, double* v_out, double* b_out) {
    const auto xi = p.eval_in_stage(stage, t_s).xi;
    const auto v = engine::linear_lyapunov(frame, lc.eta_star, rfs, theta, omega, omega_b, xi);
    const double beta1 = 2.0 * N * sq(bounds.L) * sq(blended_force(rfs, omega_b, xi)) /
                         (lc.eta_star * frame.sigma_m * mb);
    if (v_out) *v_out = v.V;
    if (b_out) *b_out = beta1;
    return 2.0 / minM * (v.V + 2.0 * beta1 / (3.0 * bounds.mu));
  };

  if (has_state(init, net.bus_count())) {
    const double wb0 = engine::weighted_mean(net.inertia(), init.omega);
    double v0 = 0.0, beta1 = 0.0;
    const double alpha = segment_coeff(0.0, 0, init.theta, init.omega, wb0, &v0, &beta1);
    cert.constants.emplace_back("V0", v0);
    cert.constants.emplace_back("beta1", beta1);
    cert.constants.emplace_back("alpha", alpha);
    cert.segments.push_back({0.0, alpha});
  }

  if (p.stage_count() > 1) {
    if (traj && !cert.segments.empty()) {
      for (const auto& [idx, stage] : later_openings(*traj, p)) {
        const auto col = static_cast<Eigen::Index>(idx);
        const double t_s = traj->times[idx];
        const double a = segment_coeff(t_s, stage, traj->theta.col(col), traj->omega.col(col),
                                       traj->omega_b(col), nullptr, nullptr);
        cert.segments.push_back({t_s, a});
        cert.constants.emplace_back("alpha@" + std::to_string(t_s), a);
      }
    } else {
      cert.valid_until = next_breakpoint(p);
    }
  }
  return cert;
}

BoundCertificate prop1_certificate(const grid::PowerNetwork& net, std::span<const nodal::ResponseFunction> rfs,
                                   const nodal::SectorBounds& bounds, const signals::DisturbanceProfile& p,
                                   engine::InitKind init_kind) {
  check_sizes(net, rfs, p);
  if (init_kind != engine::InitKind::Steady) {
    throw Error(ErrorCode::NoSteadyInit, "P1 needs a steady-state start, got " + engine::to_string(init_kind));
  }
  const auto spec = grid::spectral_summary(net);
  const double N = static_cast<double>(net.bus_count());
  const auto rs = signals::rate_stats(p, net.inertia());
  const auto lc = linear_constants(spec.lambda2, bounds.mu, bounds.L, N, net.mean_inertia(), net.min_inertia(),
                                   rs.C, rs.C_lim);
  const auto jump = signals::initial_jump(p, 0.0);

  BoundCertificate cert;
  cert.kind = BoundCertificate::Kind::P1;
  cert.network_fingerprint = net.fingerprint();
  cert.flow = engine::Flow::Kind::Linear;
  cert.requires_steady_init = true;
  cert.rate = lc.c;
  cert.floor = lc.limiting_term;
  cert.valid_until = next_breakpoint(p);
  cert.segments.push_back({0.0, lc.alpha_star * sq(jump.norm)});
  cert.constants = {{"K", lc.K},
                    {"c", lc.c},
                    {"eta_star", lc.eta_star},
                    {"limiting_term", lc.limiting_term},
                    {"limiting_term_lim", lc.limiting_term_lim},
                    {"phi1", lc.phi1},
                    {"phi2", lc.phi2},
                    {"alpha_star", lc.alpha_star}};
  cert.provenance = {{"lambda2", spec.lambda2}, {"mu", bounds.mu}, {"L", bounds.L}, {"C", rs.C},
                     {"C_lim", rs.C_lim},       {"jump", jump.norm}, {"N", N}};
  return cert;
}

namespace {

struct NonlinearSetup {
  grid::SpectralSummary spec;
  signals::RateStats rs;
  signals::AssumptionTwo a2;
  NonlinearConstants nc;
};

NonlinearSetup nonlinear_setup(const grid::PowerNetwork& baseline, std::span<const nodal::ResponseFunction> rfs,
                               const nodal::SectorBounds& bounds, const signals::DisturbanceProfile& p, double k,
                               double rho) {
  check_sizes(baseline, rfs, p);
  check_rho(rho);
  if (!(k > 0.0)) throw Error(ErrorCode::NonPositiveScale, "k must be positive");
  NonlinearSetup s;
  s.a2 = signals::check_assumption2(baseline, p, bounds, rho, k);
  if (!s.a2.pass) {
    throw Error(ErrorCode::AssumptionTwoFailed, "feasibility margin " + num(s.a2.margin) +
                                                    " (lhs " + num(s.a2.lhs) + ", rhs " +
                                                    num(s.a2.rhs) + ")");
  }
  s.spec = grid::spectral_summary(baseline);
  s.rs = signals::rate_stats(p, baseline.inertia());
  s.nc = nonlinear_constants(s.spec.lambda2, s.spec.lambdaN, s.spec.lambda2_L, s.spec.norm_AY, bounds.mu,
                             bounds.L, static_cast<double>(baseline.bus_count()), baseline.mean_inertia(),
                             baseline.min_inertia(), baseline.max_inertia(), k, rho);
  return s;
}

NamedValues nonlinear_named(const NonlinearConstants& nc) {
  return {{"eta_star", nc.eta_star}, {"c", nc.c},     {"phi1_k", nc.phi1}, {"phi2_k", nc.phi2},
          {"beta", nc.beta},         {"V_c", nc.V_c}, {"C_bar", nc.C_bar}, {"phi3_offset", nc.phi3_offset}};
}

NamedValues nonlinear_provenance(const NonlinearSetup& s, const nodal::SectorBounds& bounds, double k,
                                 double rho) {
  return {{"lambda2", s.spec.lambda2}, {"lambdaN", s.spec.lambdaN}, {"lambda2_L", s.spec.lambda2_L},
          {"norm_AY", s.spec.norm_AY}, {"mu", bounds.mu},           {"L", bounds.L},
          {"C", s.rs.C},               {"C_lim", s.rs.C_lim},       {"k", k},
          {"rho", rho},                {"assumption2_margin", s.a2.margin}};
}

}  // namespace

BoundCertificate theorem2_certificate(const grid::PowerNetwork& baseline,
                                      std::span<const nodal::ResponseFunction> rfs,
                                      const nodal::SectorBounds& bounds, const signals::DisturbanceProfile& p,
                                      double k, double rho, const engine::InitialState& init,
                                      const engine::Trajectory* traj) {
  const auto s = nonlinear_setup(baseline, rfs, bounds, p, k, rho);
  const auto& nc = s.nc;
  const double N = static_cast<double>(baseline.bus_count());
  const double mb = baseline.mean_inertia();
  const double minM = baseline.min_inertia();
  const double phi = nc.phi1 + nc.phi2;
  const auto frame = TransformedFrame::build(baseline);

  BoundCertificate cert;
  cert.kind = BoundCertificate::Kind::T2;
  cert.network_fingerprint = grid::scale_lines(baseline, k).fingerprint();
  cert.flow = engine::Flow::Kind::Sinusoidal;
  cert.rate = nc.c;
  cert.floor = nc.beta * sq(s.rs.C);
  cert.constants = nonlinear_named(nc);
  cert.provenance = nonlinear_provenance(s, bounds, k, rho);
  if (s.rs.C > nc.C_bar) cert.failed_conditions.push_back("C exceeds C_bar");

  // V_bar(t_s+) = V(t_s+) + 2 N L^2 phi |f_b + xi_b|^2 / (M_b (2 mu - c))
  auto v_bar = [&](double t_s, std::size_t stage, const Eigen::VectorXd& theta, const Eigen::VectorXd& omega,
                   double omega_b) {
    const auto xi = p.eval_in_stage(stage, t_s).xi;
    const auto v = engine::nonlinear_lyapunov(frame, k, rho, nc.eta_star, rfs, theta, omega, omega_b, xi);
    return std::pair{v.V + 2.0 * N * sq(bounds.L) * phi * sq(blended_force(rfs, omega_b, xi)) /
                               (mb * (2.0 * bounds.mu - nc.c)),
                     v.V};
  };

  if (has_state(init, baseline.bus_count())) {
    const double wb0 = engine::weighted_mean(baseline.inertia(), init.omega);
    const auto xi0 = p.eval_in_stage(0, 0.0).xi;
    const auto [vb, v0] = v_bar(0.0, 0, init.theta, init.omega, wb0);
    const double alpha = 4.0 / minM * vb;
    const double omega_limit = std::abs(xi0.mean()) / (bounds.mu * mb) + nc.phi3_offset;
    cert.constants.insert(cert.constants.end(), {{"V0", v0}, {"V_bar", vb}, {"alpha", alpha},
                                                 {"omega_b0", wb0}, {"omega_b0_limit", omega_limit}});
    if (vb > nc.V_c) cert.failed_conditions.push_back("V_bar(0+) exceeds V_c");
    if (std::abs(wb0) > omega_limit) cert.failed_conditions.push_back("|omega_b(0)| exceeds its limit");
    cert.segments.push_back({0.0, alpha});
  }

  if (p.stage_count() > 1) {
    if (traj && !cert.segments.empty()) {
      for (const auto& [idx, stage] : later_openings(*traj, p)) {
        const auto col = static_cast<Eigen::Index>(idx);
        const double t_s = traj->times[idx];
        const double a =
            4.0 / minM * v_bar(t_s, stage, traj->theta.col(col), traj->omega.col(col), traj->omega_b(col)).first;
        cert.segments.push_back({t_s, a});
        cert.constants.emplace_back("alpha@" + std::to_string(t_s), a);
      }
    } else {
      cert.valid_until = next_breakpoint(p);
    }
  }
  return cert;
}

BoundCertificate prop2_certificate(const grid::PowerNetwork& baseline,
                                   std::span<const nodal::ResponseFunction> rfs,
                                   const nodal::SectorBounds& bounds, const signals::DisturbanceProfile& p,
                                   double k, double rho, engine::InitKind init_kind) {
  if (init_kind != engine::InitKind::Steady) {
    throw Error(ErrorCode::NoSteadyInit, "P2 needs a steady-state start, got " + engine::to_string(init_kind));
  }
  const auto s = nonlinear_setup(baseline, rfs, bounds, p, k, rho);
  const auto& nc = s.nc;
  const auto jump = signals::initial_jump(p, 0.0);
  if (jump.norm > nc.Delta_bar) {
    throw Error(ErrorCode::JumpTooLarge,
                "|dxi| = " + num(jump.norm) + " exceeds " + num(nc.Delta_bar));
  }
  if (s.rs.C > nc.C_bar) {
    throw Error(ErrorCode::RateTooLarge,
                "C = " + num(s.rs.C) + " exceeds " + num(nc.C_bar));
  }

  BoundCertificate cert;
  cert.kind = BoundCertificate::Kind::P2;
  cert.network_fingerprint = grid::scale_lines(baseline, k).fingerprint();
  cert.flow = engine::Flow::Kind::Sinusoidal;
  cert.requires_steady_init = true;
  cert.rate = nc.c;
  cert.floor = nc.beta * sq(s.rs.C);
  cert.valid_until = next_breakpoint(p);
  cert.segments.push_back({0.0, nc.alpha_star * sq(jump.norm)});
  cert.constants = nonlinear_named(nc);
  cert.constants.insert(cert.constants.end(), {{"zeta1", nc.zeta1},
                                               {"zeta2", nc.zeta2},
                                               {"Delta_bar", nc.Delta_bar},
                                               {"alpha_star", nc.alpha_star}});
  cert.provenance = nonlinear_provenance(s, bounds, k, rho);
  cert.provenance.emplace_back("jump", jump.norm);
  return cert;
}

std::optional<double> search_rho(const grid::PowerNetwork& baseline, const signals::DisturbanceProfile& p,
                                 const nodal::SectorBounds& bounds, double k, std::size_t grid_points) {
  const auto sups = signals::profile_sups(baseline, p);
  const auto spec = grid::spectral_summary(baseline);
  for (std::size_t j = grid_points; j >= 1; --j) {
    const double rho = kQuarterPi * static_cast<double>(j) / static_cast<double>(grid_points + 1);
    const auto a2 = signals::assumption2_from_sups(sups.xi_b, sups.edge, bounds.L, bounds.mu,
                                                   baseline.max_inertia(), baseline.mean_inertia(),
                                                   spec.lambda2_L, rho, k);
    if (a2.pass) return rho;
  }
  return std::nullopt;
}

}  // namespace coherency::certify
