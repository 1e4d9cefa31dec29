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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coherency/bench/scenario.hpp"
#include "coherency/certify/certificates.hpp"
#include "coherency/engine/simulate.hpp"
#include "coherency/error.hpp"

namespace coherency::bench {

struct StageSummary {
  double start = 0.0;
  double end = 0.0;
  double sup_err = 0.0;
};

/// Least-squares slope of log err. The window opens at `t_start` and closes
/// at the first sample where err falls below 3x the plateau, the largest err
/// over the last 20% of the stage.
struct DecayFit {
  double rate = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  double plateau = 0.0;
  std::size_t points = 0;
  bool ok = false;
};

DecayFit fit_decay(std::span<const double> times, const Eigen::VectorXd& err, double stage_start,
                   double stage_end);

struct CertificateOutcome {
  std::string name;
  std::optional<certify::BoundCertificate> certificate;
  std::optional<certify::VerifyReport> verdict;
  std::optional<ErrorCode> error;
  std::string message;
};

struct RunReport {
  std::string scenario;
  std::string network_source;
  std::uint64_t hash = 0;
  std::filesystem::path trajectory_csv;
  std::filesystem::path report_path;
  std::filesystem::path certificate_csv;

  std::vector<StageSummary> stages;
  double sup_err = 0.0;
  double sup_err_final = 0.0;  // over the final 20% of the horizon
  double sup_coi = 0.0;        // sup |omega_COI|
  double sup_blend_gap = 0.0;  // sup |omega_b - omega_COI|
  DecayFit decay;              // first stage

  double lambda2 = 0.0;
  double lambda2_L = 0.0;
  double lambdaN = 0.0;
  nodal::SectorBounds bounds;
  double rho = 0.0;
  std::optional<signals::AssumptionTwo> assumption2;

  std::vector<CertificateOutcome> certificates;
  double seconds_simulate = 0.0;
  double seconds_certify = 0.0;

  engine::Trajectory trajectory;
};

struct RunOptions {
  bool write_files = true;  // needs a non-empty out_dir on the scenario
};

/// Integrates, summarises, certifies and verifies. Certificate failures are
/// recorded in the report; simulation failures throw with scenario context.
RunReport run_scenario(const Scenario& s, const RunOptions& opt = {});

nlohmann::json report_json(const RunReport& r);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0: hardware
/// concurrency). The first exception is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace coherency::bench
