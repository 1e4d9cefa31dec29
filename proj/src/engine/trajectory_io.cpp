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

#include "coherency/engine/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coherency/error.hpp"

namespace coherency::engine {

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) parts.push_back(cur);
  return parts;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, bool with_angles) {
  const auto n = traj.omega.rows();
  out << "# flow," << to_string(traj.flow.kind) << ',';
  put(out, traj.flow.k);
  out << "\n# init," << to_string(traj.init) << "\n# network," << traj.network_fingerprint << '\n';
  out << "# tolerance,";
  put(out, traj.rel_tol);
  out << ',';
  put(out, traj.abs_tol);
  out << '\n';
  for (const auto idx : traj.stage_marks) {
    out << "# stage_mark," << idx << ',';
    put(out, traj.times[idx]);
    out << '\n';
  }
  out << 't';
  for (Eigen::Index i = 0; i < n; ++i) out << ",omega_" << i + 1;
  out << ",omega_b,omega_coi,err";
  if (with_angles) {
    for (Eigen::Index i = 0; i < n; ++i) out << ",theta_" << i + 1;
  }
  out << '\n';
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    put(out, traj.times[j]);
    for (Eigen::Index i = 0; i < n; ++i) {
      out << ',';
      put(out, traj.omega(i, c));
    }
    out << ',';
    put(out, traj.omega_b(c));
    out << ',';
    put(out, traj.omega_coi(c));
    out << ',';
    put(out, traj.err(c));
    if (with_angles) {
      for (Eigen::Index i = 0; i < n; ++i) {
        out << ',';
        put(out, traj.theta(i, c));
      }
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, bool with_angles) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_trajectory_csv(out, traj, with_angles);
}

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory traj;
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto parts = split(line.substr(2), ',');
      if (parts.empty()) continue;
      if (parts[0] == "stage_mark" && parts.size() >= 2) {
        traj.stage_marks.push_back(std::stoul(parts[1]));
      } else if (parts[0] == "flow" && parts.size() >= 3) {
        traj.flow.kind = parts[1] == "sinusoidal" ? Flow::Kind::Sinusoidal : Flow::Kind::Linear;
        traj.flow.k = std::stod(parts[2]);
      } else if (parts[0] == "init" && parts.size() >= 2) {
        if (parts[1] == "steady") traj.init = InitKind::Steady;
        if (parts[1] == "zero") traj.init = InitKind::Zero;
        if (parts[1] == "random") traj.init = InitKind::Random;
      } else if (parts[0] == "network" && parts.size() >= 2) {
        traj.network_fingerprint = std::stoull(parts[1]);
      } else if (parts[0] == "tolerance" && parts.size() >= 3) {
        traj.rel_tol = std::stod(parts[1]);
        traj.abs_tol = std::stod(parts[2]);
      }
      continue;
    }
    if (header.empty()) {
      header = split(line, ',');
      continue;
    }
    const auto parts = split(line, ',');
    if (parts.size() != header.size()) {
      throw Error(ErrorCode::ParseError, "trajectory row " + std::to_string(line_no) + " has " +
                                             std::to_string(parts.size()) + " fields, expected " +
                                             std::to_string(header.size()));
    }
    std::vector<double> row;
    row.reserve(parts.size());
    for (const auto& p : parts) {
      try {
        row.push_back(std::stod(p));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad number on trajectory line " + std::to_string(line_no));
      }
    }
    rows.push_back(std::move(row));
  }
  if (header.empty() || header[0] != "t") throw Error(ErrorCode::ParseError, "missing trajectory header");
  Eigen::Index n = 0;
  while (static_cast<std::size_t>(n + 1) < header.size() &&
         header[static_cast<std::size_t>(n + 1)].rfind("omega_", 0) == 0 &&
         header[static_cast<std::size_t>(n + 1)] != "omega_b" &&
         header[static_cast<std::size_t>(n + 1)] != "omega_coi") {
    ++n;
  }
  const std::size_t base = static_cast<std::size_t>(n) + 1;
  const bool angles = header.size() == base + 3 + static_cast<std::size_t>(n);
  if (header.size() != base + 3 && !angles) throw Error(ErrorCode::ParseError, "unexpected trajectory columns");
  const auto S = static_cast<Eigen::Index>(rows.size());
  traj.times.resize(rows.size());
  traj.omega.resize(n, S);
  traj.theta = Eigen::MatrixXd::Zero(n, S);
  traj.omega_b.resize(S);
  traj.omega_coi.resize(S);
  traj.err.resize(S);
  traj.spread.resize(S);
  for (Eigen::Index j = 0; j < S; ++j) {
    const auto& r = rows[static_cast<std::size_t>(j)];
    traj.times[static_cast<std::size_t>(j)] = r[0];
    for (Eigen::Index i = 0; i < n; ++i) traj.omega(i, j) = r[static_cast<std::size_t>(i) + 1];
    traj.omega_b(j) = r[base];
    traj.omega_coi(j) = r[base + 1];
    traj.err(j) = r[base + 2];
    if (angles) {
      for (Eigen::Index i = 0; i < n; ++i) traj.theta(i, j) = r[base + 3 + static_cast<std::size_t>(i)];
    }
    traj.spread(j) = n > 0 ? traj.omega.col(j).maxCoeff() - traj.omega.col(j).minCoeff() : 0.0;
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  return read_trajectory_csv(in);
}

}  // namespace coherency::engine
