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

#include "coherency/bench/cases.hpp"

#include <random>

#include "coherency/grid/network_io.hpp"

namespace coherency::bench {

using nlohmann::json;

grid::PowerNetwork surrogate_network(std::uint64_t seed, const SurrogateSpec& spec) {
  grid::RandomNetworkSpec rs;
  rs.buses = spec.buses;
  rs.extra_edges = spec.extra_edges;
  rs.inertia_lo = spec.inertia_lo;
  rs.inertia_hi = spec.inertia_hi;
  rs.sensitivity_lo = spec.sensitivity_lo;
  rs.sensitivity_hi = spec.sensitivity_hi;
  return grid::random_network(rs, seed);
}

std::vector<nodal::ResponseFunction> surrogate_responses(std::size_t buses, std::uint64_t seed,
                                                         const SurrogateSpec& spec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(spec.damping_lo, spec.damping_hi);
  std::vector<nodal::ResponseFunction> out;
  for (std::size_t i = 0; i < buses; ++i) out.push_back(nodal::ResponseFunction::saturated(U(rng), spec.saturation));
  return out;
}

namespace {

grid::PowerNetwork case_grid(const CaseOptions& opt, std::string& source) {
  if (!opt.grid) {
    source = "surrogate-35";
    return surrogate_network(opt.seed);
  }
  const auto& path = *opt.grid;
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, "no grid file " + path.string());
  if (path.extension() == ".m") {
    source = "matpower:" + path.string();
    return grid::matpower_network(grid::read_matpower(path), 5.0);
  }
  source = "file:" + path.string();
  return grid::load_network_json(path);
}

json response_json(const nodal::ResponseFunction& rf) {
  return {{"kind", "saturated"}, {"D", rf.damping()}, {"s", rf.saturation()}};
}

}  // namespace

std::vector<Scenario> case_scenarios(const CaseOptions& opt) {
  std::string source;
  const auto net = case_grid(opt, source);
  const auto rfs = surrogate_responses(net.bus_count(), opt.seed + 1);
  json responses = json::array();
  for (const auto& rf : rfs) responses.push_back(response_json(rf));

  json base;
  base["seed"] = opt.seed;
  base["network"] = {{"inline", grid::network_to_json(net)}};
  base["responses"] = responses;
  base["flow"] = {{"model", "sinusoidal"}, {"k", 1.0}};
  base["rho"] = "auto";
  base["init"] = {{"kind", "random"}, {"spread", 1e-3}, {"seed", opt.seed + 3}};
  base["horizon"] = {{"t_end", opt.t_end}, {"dt", opt.dt}};
  base["integrator"] = opt.fixed_step ? json{{"method", "rk4"}, {"fixed_step", 0.005}}
                                      : json{{"method", "dp45"}, {"rel_tol", 1e-9}, {"abs_tol", 1e-11}};
  base["certificates"] = {"T2"};
  json two_stage = {{"seed", opt.seed + 2}, {"t_switch", opt.t_switch}};

  std::vector<Scenario> out;
  auto add = [&](const std::string& name, json stage, double k) {
    json doc = base;
    doc["name"] = name;
    doc["disturbance"] = {{"two_stage", std::move(stage)}};
    doc["flow"]["k"] = k;
    if (!opt.out_dir.empty()) doc["output"] = {{"dir", opt.out_dir.string()}};
    auto s = scenario_from_json(doc);
    s.network_source = source;
    out.push_back(std::move(s));
  };
  add("case1", two_stage, 1.0);
  json modified = two_stage;
  modified["delta_scale"] = 0.5;
  modified["omega_scale"] = 0.25;
  modified["b_scale"] = 2.0;
  add("case2", modified, 1.0);
  add("case3", two_stage, 6.0);
  return out;
}

namespace {

double sup_after(const engine::Trajectory& traj, double t0) {
  double m = 0.0;
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    if (traj.times[j] > t0) m = std::max(m, traj.err(static_cast<Eigen::Index>(j)));
  }
  return m;
}

double err_before(const engine::Trajectory& traj, double t0) {
  double e = 0.0;
  for (std::size_t j = 0; j < traj.times.size() && traj.times[j] < t0; ++j) e = traj.err(static_cast<Eigen::Index>(j));
  return e;
}

}  // namespace

bool CaseSuite::all_pass() const {
  return std::all_of(comparisons.begin(), comparisons.end(), [](const auto& c) { return c.pass; });
}

CaseSuite builtin_cases(const CaseOptions& opt) {
  const auto scenarios = case_scenarios(opt);
  CaseSuite suite;
  suite.grid_source = scenarios.front().network_source;
  suite.reports.resize(scenarios.size());
  parallel_for(scenarios.size(), opt.threads, [&](std::size_t i) { suite.reports[i] = run_scenario(scenarios[i]); });

  const auto& c1 = suite.reports[0];
  const auto& c2 = suite.reports[1];
  const auto& c3 = suite.reports[2];
  const double ts = opt.t_switch;
  auto cmp = [&](std::string name, double lhs, double rhs) {
    suite.comparisons.push_back({std::move(name), lhs, rhs, lhs < rhs});
  };
  cmp("case2 sup err after switch < case1", sup_after(c2.trajectory, ts), sup_after(c1.trajectory, ts));
  cmp("case1 stage-1 decay rate < case3", c1.decay.rate, c3.decay.rate);
  cmp("case3 sup err after switch < case1", sup_after(c3.trajectory, ts), sup_after(c1.trajectory, ts));
  suite.comparisons.push_back({"case1 sup |w_b - w_coi| <= 0.2 sup |w_coi|", c1.sup_blend_gap, 0.2 * c1.sup_coi,
                               c1.sup_blend_gap <= 0.2 * c1.sup_coi});
  cmp("case1 err before switch < 1e-5", err_before(c1.trajectory, ts), 1e-5);
  return suite;
}

json case_suite_json(const CaseSuite& suite) {
  json j;
  j["grid_source"] = suite.grid_source;
  j["all_pass"] = suite.all_pass();
  auto& cases = j["cases"] = json::array();
  for (const auto& r : suite.reports) cases.push_back(report_json(r));
  auto& cmps = j["comparisons"] = json::array();
  for (const auto& c : suite.comparisons) {
    cmps.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  }
  return j;
}

}  // namespace coherency::bench
