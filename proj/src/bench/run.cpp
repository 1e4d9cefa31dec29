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

#include "coherency/bench/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "coherency/certify/report.hpp"
#include "coherency/engine/trajectory_io.hpp"

namespace coherency::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CertificateOutcome certify_one(certify::BoundCertificate::Kind kind, const Scenario& s,
                               const nodal::SectorBounds& bounds, double rho, const engine::InitialState& init,
                               const engine::Trajectory& traj) {
  CertificateOutcome out;
  out.name = certify::to_string(kind);
  const auto& net = s.net();
  const auto& p = s.disturbance();
  const bool linear = s.flow.kind == engine::Flow::Kind::Linear;
  try {
    using K = certify::BoundCertificate::Kind;
    if ((kind == K::T1 || kind == K::P1) && !linear) {
      throw Error(ErrorCode::AssumptionMismatch, out.name + " applies to the linear flow model");
    }
    if ((kind == K::T2 || kind == K::P2) && linear) {
      throw Error(ErrorCode::AssumptionMismatch, out.name + " applies to the sinusoidal flow model");
    }
    switch (kind) {
      case K::T1:
        out.certificate =
            certify::theorem1_certificate(grid::scale_lines(net, s.flow.k), s.responses, bounds, p, init, &traj);
        break;
      case K::P1:
        out.certificate = certify::prop1_certificate(grid::scale_lines(net, s.flow.k), s.responses, bounds, p, init.kind);
        break;
      case K::T2:
        out.certificate = certify::theorem2_certificate(net, s.responses, bounds, p, s.flow.k, rho, init, &traj);
        break;
      case K::P2:
        out.certificate = certify::prop2_certificate(net, s.responses, bounds, p, s.flow.k, rho, init.kind);
        break;
    }
    out.verdict = certify::verify_bound(traj, *out.certificate);
  } catch (const Error& e) {
    out.error = e.code();
    out.message = e.what();
  }
  return out;
}

void write_report_files(RunReport& r, const Scenario& s) {
  const auto dir = s.out_dir / s.name;
  std::filesystem::create_directories(dir);
  r.trajectory_csv = dir / "trajectory.csv";
  r.report_path = dir / "report.json";
  r.certificate_csv = dir / "certificates.csv";
  engine::write_trajectory_csv(r.trajectory_csv, r.trajectory, s.write_angles);
  {
    std::ofstream out(r.certificate_csv);
    out << certify::csv_header() << "\n";
    for (const auto& c : r.certificates) {
      if (c.certificate) out << certify::csv_row(s.name, *c.certificate, c.verdict ? &*c.verdict : nullptr) << "\n";
    }
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + r.certificate_csv.string());
  }
  std::ofstream out(r.report_path);
  out << report_json(r).dump(2) << "\n";
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + r.report_path.string());
}

}  // namespace

DecayFit fit_decay(std::span<const double> times, const Eigen::VectorXd& err, double stage_start,
                   double stage_end) {
  DecayFit fit;
  std::size_t first = times.size(), last = 0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] >= stage_start && times[j] < stage_end) {
      first = std::min(first, j);
      last = j;
    }
  }
  if (first >= times.size() || last <= first) return fit;
  const double t0 = times[first];
  const double cut = t0 + 0.8 * (times[last] - t0);
  for (std::size_t j = first; j <= last; ++j) {
    if (times[j] >= cut) fit.plateau = std::max(fit.plateau, err(static_cast<Eigen::Index>(j)));
  }
  std::size_t stop = last;
  for (std::size_t j = first; j <= last; ++j) {
    if (err(static_cast<Eigen::Index>(j)) < 3.0 * fit.plateau) {
      stop = j;
      break;
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t j = first; j <= stop; ++j) {
    const double e = err(static_cast<Eigen::Index>(j));
    if (!(e > 0.0)) continue;
    const double x = times[j], y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  fit.t_start = t0;
  fit.t_end = times[stop];
  fit.points = n;
  const double den = static_cast<double>(n) * sxx - sx * sx;
  if (n < 2 || !(std::abs(den) > 0.0)) return fit;
  fit.rate = -(static_cast<double>(n) * sxy - sx * sy) / den;
  fit.ok = true;
  return fit;
}

RunReport run_scenario(const Scenario& s, const RunOptions& opt) {
  RunReport r;
  r.scenario = s.name;
  r.network_source = s.network_source;
  r.hash = s.hash;
  const auto& net = s.net();
  const auto& p = s.disturbance();
  const bool linear = s.flow.kind == engine::Flow::Kind::Linear;
  const std::string context = "scenario '" + s.name + "': ";

  const auto t_sim = Clock::now();
  try {
    r.bounds = nodal::sector_bounds(s.responses, net.inertia(), s.sector_lo, s.sector_hi);
    const auto spec = grid::spectral_summary(linear ? grid::scale_lines(net, s.flow.k) : net);
    r.lambda2 = spec.lambda2;
    r.lambda2_L = spec.lambda2_L;
    r.lambdaN = spec.lambdaN;
    r.rho = s.rho.value_or(M_PI / 8.0);
    if (!linear) {
      if (!s.rho) {
        if (const auto found = certify::search_rho(net, p, r.bounds, s.flow.k)) r.rho = *found;
      }
      r.assumption2 = signals::check_assumption2(net, p, r.bounds, r.rho, s.flow.k);
    }
    const auto init = make_initial_state(s, r.bounds, r.rho);
    const auto grid = engine::make_grid(s.t_end, s.dt, p);
    r.trajectory = engine::simulate(net, s.responses, p, init, s.flow, s.integrator, grid);
    r.seconds_simulate = seconds_since(t_sim);

    const auto& traj = r.trajectory;
    const auto& t = traj.times;
    for (std::size_t st = 0; st < p.stage_count(); ++st) {
      StageSummary sum{p.stage_start(st), std::min(p.stage_end(st), s.t_end), 0.0};
      if (sum.start > s.t_end) break;
      for (std::size_t j = 0; j < t.size(); ++j) {
        const bool inside = t[j] >= sum.start && (t[j] < sum.end || (st + 1 == p.stage_count() && t[j] <= sum.end));
        if (inside) sum.sup_err = std::max(sum.sup_err, traj.err(static_cast<Eigen::Index>(j)));
      }
      r.stages.push_back(sum);
    }
    for (std::size_t j = 0; j < t.size(); ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      r.sup_err = std::max(r.sup_err, traj.err(c));
      if (t[j] >= 0.8 * s.t_end) r.sup_err_final = std::max(r.sup_err_final, traj.err(c));
      r.sup_coi = std::max(r.sup_coi, std::abs(traj.omega_coi(c)));
      r.sup_blend_gap = std::max(r.sup_blend_gap, std::abs(traj.omega_b(c) - traj.omega_coi(c)));
    }
    r.decay = fit_decay(t, traj.err, 0.0, std::min(p.stage_end(0), s.t_end + 1.0));

    const auto t_cert = Clock::now();
    for (const auto kind : s.certificates) r.certificates.push_back(certify_one(kind, s, r.bounds, r.rho, init, traj));
    r.seconds_certify = seconds_since(t_cert);

    if (opt.write_files && !s.out_dir.empty()) write_report_files(r, s);
  } catch (const Error& e) {
    throw Error(e.code(), context + e.what());
  }
  return r;
}

nlohmann::json report_json(const RunReport& r) {
  using nlohmann::json;
  auto num = [](double v) -> json { return std::isfinite(v) ? json(v) : json(std::to_string(v)); };
  json j;
  j["scenario"] = r.scenario;
  j["network_source"] = r.network_source;
  j["hash"] = r.hash;
  j["files"] = {{"trajectory", r.trajectory_csv.string()},
                {"report", r.report_path.string()},
                {"certificates", r.certificate_csv.string()}};
  auto& stages = j["stages"] = json::array();
  for (const auto& st : r.stages) stages.push_back({{"start", st.start}, {"end", num(st.end)}, {"sup_err", st.sup_err}});
  j["sup_err"] = r.sup_err;
  j["sup_err_final_20pct"] = r.sup_err_final;
  j["sup_coi"] = r.sup_coi;
  j["sup_blend_gap"] = r.sup_blend_gap;
  j["decay_fit"] = {{"rate", r.decay.rate},       {"window_start", r.decay.t_start}, {"window_end", r.decay.t_end},
                    {"plateau", r.decay.plateau}, {"points", r.decay.points},        {"ok", r.decay.ok}};
  j["spectrum"] = {{"lambda2", r.lambda2}, {"lambda2_L", r.lambda2_L}, {"lambdaN", r.lambdaN}};
  j["sector"] = {{"mu", r.bounds.mu}, {"L", r.bounds.L}, {"lo", r.bounds.lo}, {"hi", r.bounds.hi}};
  j["rho"] = r.rho;
  if (r.assumption2) {
    j["assumption2"] = {{"pass", r.assumption2->pass}, {"margin", r.assumption2->margin},
                        {"lhs", r.assumption2->lhs},   {"rhs", r.assumption2->rhs}};
  }
  auto& certs = j["certificates"] = json::array();
  for (const auto& c : r.certificates) {
    json cj;
    if (c.certificate) cj = certify::certificate_json(*c.certificate, c.verdict ? &*c.verdict : nullptr);
    cj["certificate"] = c.name;
    if (c.error) {
      cj["error"] = to_string(*c.error);
      cj["message"] = c.message;
    }
    certs.push_back(cj);
  }
  j["timing_seconds"] = {{"simulate", r.seconds_simulate}, {"certify", r.seconds_certify}};
  j["samples"] = r.trajectory.sample_count();
  j["integrator_steps"] = r.trajectory.steps;
  return j;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace coherency::bench
