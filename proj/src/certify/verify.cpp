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

#include <algorithm>
#include <cmath>

#include "coherency/certify/certificates.hpp"
#include "coherency/error.hpp"

namespace coherency::certify {

VerifyReport verify_bound(const engine::Trajectory& traj, const BoundCertificate& cert) {
  if (traj.flow.kind != cert.flow) {
    throw Error(ErrorCode::AssumptionMismatch,
                cert.name() + " certificate expects " + engine::to_string(cert.flow) + " flow");
  }
  if (traj.network_fingerprint != cert.network_fingerprint) {
    throw Error(ErrorCode::AssumptionMismatch, cert.name() + " certificate belongs to a different network");
  }
  if (cert.requires_steady_init && traj.init != engine::InitKind::Steady) {
    throw Error(ErrorCode::AssumptionMismatch,
                cert.name() + " certificate needs a steady start, run used " + engine::to_string(traj.init));
  }

  BoundCertificate used = cert;
  VerifyReport rep;
  if (used.segments.empty()) {
    if (traj.times.empty()) return rep;
    const double e0 = traj.err(0);
    const double alpha = std::max(0.0, e0 * e0 - used.floor);
    rep.fitted_alpha = alpha;
    used.segments.push_back({traj.times.front(), alpha});
  }

  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const double t = traj.times[j];
    if (t > used.valid_until) break;
    const double b = used.bound(t);
    if (!std::isfinite(b)) continue;
    const double e2 = traj.err(static_cast<Eigen::Index>(j)) * traj.err(static_cast<Eigen::Index>(j));
    const double margin = b * (1.0 + 1e-6) + 1e-12 - e2;
    ++rep.checked;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (b > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, e2 / b);
    else if (e2 > 0.0) rep.worst_ratio = std::numeric_limits<double>::infinity();
    if (margin < 0.0) {
      rep.holds = false;
      rep.violation_times.push_back(t);
    }
  }
  return rep;
}

}  // namespace coherency::certify
