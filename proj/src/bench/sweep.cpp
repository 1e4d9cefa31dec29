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

#include "coherency/bench/sweep.hpp"

#include <cstdio>
#include <sstream>

#include "coherency/certify/report.hpp"
#include "coherency/error.hpp"

namespace coherency::bench {

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "lambda2") return SweepParam::Lambda2;
  if (name == "k") return SweepParam::K;
  throw Error(ErrorCode::SchemaViolation, "sweep parameter must be lambda2 or k, got " + name);
}

std::string to_string(SweepParam p) { return p == SweepParam::Lambda2 ? "lambda2" : "k"; }

std::vector<Scenario> sweep_scenarios(const Scenario& base, SweepParam param, const std::vector<double>& values) {
  std::vector<Scenario> out;
  const double lambda2 = grid::spectral_summary(base.net()).lambda2;
  for (const double v : values) {
    if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveScale, to_string(param) + " values must be positive");
    Scenario s = base;
    char tag[64];
    std::snprintf(tag, sizeof tag, "%s_%s=%g", base.name.c_str(), to_string(param).c_str(), v);
    s.name = tag;
    if (param == SweepParam::Lambda2) {
      s.network = grid::scale_lines(base.net(), v / lambda2);
    } else {
      s.flow.k = v;
    }
    s.source["sweep"] = {{"param", to_string(param)}, {"value", v}};
    s.hash = scenario_hash(s);
    out.push_back(std::move(s));
  }
  return out;
}

SweepResult run_sweep(const Scenario& base, SweepParam param, const std::vector<double>& values, std::size_t threads) {
  const auto scenarios = sweep_scenarios(base, param, values);
  SweepResult res;
  res.reports.resize(scenarios.size());
  parallel_for(scenarios.size(), threads, [&](std::size_t i) { res.reports[i] = run_scenario(scenarios[i]); });
  std::ostringstream csv;
  csv << "param,value," << certify::csv_header() << ",error\n";
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    for (const auto& c : res.reports[i].certificates) {
      csv << to_string(param) << "," << values[i] << ",";
      if (c.certificate) {
        csv << certify::csv_row(scenarios[i].name, *c.certificate, c.verdict ? &*c.verdict : nullptr) << ",";
      } else {
        csv << scenarios[i].name << "," << c.name << std::string(certify::csv_columns().size() - 2, ',') << ",";
      }
      csv << (c.error ? to_string(*c.error) : "") << "\n";
    }
  }
  res.csv = csv.str();
  return res;
}

}  // namespace coherency::bench
