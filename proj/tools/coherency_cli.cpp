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

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "coherency/bench/cases.hpp"
#include "coherency/bench/run.hpp"
#include "coherency/bench/scenario.hpp"
#include "coherency/bench/sweep.hpp"
#include "coherency/certify/report.hpp"
#include "coherency/error.hpp"

namespace cb = coherency::bench;

namespace {

struct Globals {
  std::string out;
  bool fixed_step = false;
  std::optional<std::uint64_t> seed;
};

cb::Scenario prepare(const std::string& path, const Globals& g, bool with_certificates) {
  auto s = cb::load_scenario(path);
  if (!g.out.empty()) s.out_dir = g.out;
  if (g.fixed_step) s.integrator.method = coherency::engine::IntegratorConfig::Method::RK4;
  if (g.seed) {
    s.seed = *g.seed;
    s.init.seed = *g.seed;
  }
  if (!with_certificates) s.certificates.clear();
  return s;
}

void print_summary(const cb::RunReport& r) {
  std::printf("%s: %zu samples, sup err %.6g, final-window sup err %.6g, decay rate %.6g\n", r.scenario.c_str(),
              r.trajectory.sample_count(), r.sup_err, r.sup_err_final, r.decay.rate);
  for (const auto& st : r.stages) std::printf("  stage [%g, %g): sup err %.6g\n", st.start, st.end, st.sup_err);
  if (!r.trajectory_csv.empty()) std::printf("  wrote %s\n", r.report_path.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency coherency simulator and bound certifier"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "output directory");
  app.add_flag("--fixed-step", g.fixed_step, "use fixed-step RK4");
  app.add_option("--seed", g.seed, "override the scenario seed");

  std::string scenario_path;
  auto* sim = app.add_subcommand("simulate", "integrate a scenario and write its trajectory");
  sim->add_option("scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);

  auto* cert = app.add_subcommand("certify", "integrate, compute the requested certificates and verify them");
  cert->add_option("scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);

  cb::CaseOptions case_opt;
  std::string grid_path;
  std::optional<std::uint64_t> case_seed;
  auto* cases = app.add_subcommand("cases", "run the three built-in cases and their comparisons");
  cases->add_option("--grid", grid_path, "network JSON or MATPOWER case instead of the 35-bus surrogate");
  cases->add_option("--seed", case_seed, "seed of the surrogate grid and disturbances");

  std::string param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "repeat a scenario over lambda2 or k values");
  sweep->add_option("scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "lambda2 or k")->required()->check(CLI::IsMember({"lambda2", "k"}));
  sweep->add_option("--values", values, "parameter values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed() || cert->parsed()) {
      const auto s = prepare(scenario_path, g, cert->parsed());
      const auto r = cb::run_scenario(s);
      print_summary(r);
      for (const auto& c : r.certificates) {
        if (c.certificate) {
          std::cout << coherency::certify::certificate_text(*c.certificate, c.verdict ? &*c.verdict : nullptr);
        }
        if (c.error) std::cout << c.name << " not issued: " << c.message << "\n";
      }
      return 0;
    }
    if (cases->parsed()) {
      if (!grid_path.empty()) case_opt.grid = grid_path;
      if (case_seed) case_opt.seed = *case_seed;
      else if (g.seed) case_opt.seed = *g.seed;
      case_opt.out_dir = g.out;
      case_opt.fixed_step = g.fixed_step;
      const auto suite = cb::builtin_cases(case_opt);
      std::printf("grid: %s\n", suite.grid_source.c_str());
      for (const auto& r : suite.reports) print_summary(r);
      for (const auto& c : suite.comparisons) {
        std::printf("%s  %s (%.6g vs %.6g)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.lhs, c.rhs);
      }
      if (!g.out.empty()) {
        std::filesystem::create_directories(g.out);
        std::ofstream(std::filesystem::path(g.out) / "cases.json") << cb::case_suite_json(suite).dump(2) << "\n";
      }
      return suite.all_pass() ? 0 : 1;
    }
    if (sweep->parsed()) {
      const auto s = prepare(scenario_path, g, true);
      const auto res = cb::run_sweep(s, cb::parse_sweep_param(param), values);
      if (!g.out.empty()) {
        std::filesystem::create_directories(g.out);
        std::ofstream(std::filesystem::path(g.out) / "sweep.csv") << res.csv;
      }
      std::cout << res.csv;
      return 0;
    }
  } catch (const coherency::Error& e) {
    std::cerr << "error [" << coherency::to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
