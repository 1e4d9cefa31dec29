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

#include "coherency/grid/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "coherency/error.hpp"

namespace coherency::grid {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

bool is_connected(std::size_t n, const std::vector<Line>& lines) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::size_t components = n;
  for (const auto& l : lines) {
    const auto a = find_root(parent, l.from);
    const auto b = find_root(parent, l.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

void fnv_mix(std::uint64_t& h, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

PowerNetwork PowerNetwork::build(std::vector<double> inertia, std::vector<Line> lines,
                                 std::vector<long> ids, bool baseline) {
  const std::size_t n = inertia.size();
  if (n < 2) {
    throw Error(ErrorCode::DisconnectedGraph, "a network needs at least two buses");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(inertia[i] > 0.0) || !std::isfinite(inertia[i])) {
      throw Error(ErrorCode::NonPositiveParameter,
                  "inertia of bus index " + std::to_string(i) + " must be positive");
    }
  }
  if (ids.empty()) {
    ids.resize(n);
    std::iota(ids.begin(), ids.end(), 1L);
  } else if (ids.size() != n) {
    throw Error(ErrorCode::UnknownBus, "bus id list does not match the inertia list");
  } else {
    std::set<long> unique(ids.begin(), ids.end());
    if (unique.size() != n) {
      throw Error(ErrorCode::UnknownBus, "bus ids must be unique");
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto& l : lines) {
    if (l.from >= n || l.to >= n) {
      throw Error(ErrorCode::UnknownBus, "line endpoint outside the bus range");
    }
    if (l.from == l.to) {
      throw Error(ErrorCode::SelfLoop, "line from bus index " + std::to_string(l.from) + " to itself");
    }
    if (!(l.sensitivity > 0.0) || !std::isfinite(l.sensitivity)) {
      throw Error(ErrorCode::NonPositiveParameter, "line sensitivities must be positive");
    }
    if (l.from > l.to) std::swap(l.from, l.to);
    if (!seen.emplace(l.from, l.to).second) {
      throw Error(ErrorCode::DuplicateEdge, "duplicate line between bus indices " +
                                                std::to_string(l.from) + " and " +
                                                std::to_string(l.to));
    }
  }
  if (!is_connected(n, lines)) {
    throw Error(ErrorCode::DisconnectedGraph, "network graph is not connected");
  }

  PowerNetwork net;
  net.inertia_ = std::move(inertia);
  net.lines_ = std::move(lines);
  net.ids_ = std::move(ids);
  net.baseline_ = baseline;
  return net;
}

double PowerNetwork::mean_inertia() const noexcept {
  return std::accumulate(inertia_.begin(), inertia_.end(), 0.0) / static_cast<double>(inertia_.size());
}

double PowerNetwork::min_inertia() const noexcept {
  return *std::min_element(inertia_.begin(), inertia_.end());
}

double PowerNetwork::max_inertia() const noexcept {
  return *std::max_element(inertia_.begin(), inertia_.end());
}

std::size_t PowerNetwork::index_of(long id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) {
    throw Error(ErrorCode::UnknownBus, "bus id " + std::to_string(id) + " not in network");
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

std::uint64_t PowerNetwork::fingerprint() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::uint64_t n = inertia_.size();
  fnv_mix(h, &n, sizeof n);
  fnv_mix(h, inertia_.data(), inertia_.size() * sizeof(double));
  for (const auto& l : lines_) {
    const std::uint64_t a = l.from;
    const std::uint64_t b = l.to;
    fnv_mix(h, &a, sizeof a);
    fnv_mix(h, &b, sizeof b);
    fnv_mix(h, &l.sensitivity, sizeof l.sensitivity);
  }
  return h;
}

NetworkMatrices laplacian_and_incidence(const PowerNetwork& net) {
  const auto n = static_cast<Eigen::Index>(net.bus_count());
  const auto e = static_cast<Eigen::Index>(net.line_count());
  NetworkMatrices out;
  out.laplacian = Eigen::MatrixXd::Zero(n, n);
  out.incidence = Eigen::MatrixXd::Zero(n, e);
  out.weights.resize(e);
  for (Eigen::Index l = 0; l < e; ++l) {
    const auto& line = net.lines()[static_cast<std::size_t>(l)];
    const auto i = static_cast<Eigen::Index>(line.from);
    const auto j = static_cast<Eigen::Index>(line.to);
    const double b = line.sensitivity;
    out.laplacian(i, j) -= b;
    out.laplacian(j, i) -= b;
    out.laplacian(i, i) += b;
    out.laplacian(j, j) += b;
    out.incidence(i, l) = 1.0;
    out.incidence(j, l) = -1.0;
    out.weights(l) = b;
  }
  return out;
}

Eigen::MatrixXd laplacian(const PowerNetwork& net) {
  return laplacian_and_incidence(net).laplacian;
}

Eigen::MatrixXd inertia_basis(std::span<const double> inertia) {
  const auto n = static_cast<Eigen::Index>(inertia.size());
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = std::sqrt(inertia[static_cast<std::size_t>(i)]);
  v.normalize();
  // u = v + e1 is well conditioned because every entry of v is positive.
  Eigen::VectorXd u = v;
  u(0) += 1.0;
  const double scale = 2.0 / u.squaredNorm();
  Eigen::MatrixXd householder = Eigen::MatrixXd::Identity(n, n) - scale * u * u.transpose();
  return householder.rightCols(n - 1);
}

SpectralSummary spectral_summary(const PowerNetwork& net) {
  const auto mats = laplacian_and_incidence(net);
  const auto n = static_cast<Eigen::Index>(net.bus_count());
  Eigen::VectorXd inv_sqrt_m(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inv_sqrt_m(i) = 1.0 / std::sqrt(net.inertia()[static_cast<std::size_t>(i)]);
  }
  const Eigen::MatrixXd scaled = inv_sqrt_m.asDiagonal() * mats.laplacian * inv_sqrt_m.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> scaled_solver(scaled, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plain_solver(mats.laplacian, Eigen::EigenvaluesOnly);
  if (scaled_solver.info() != Eigen::Success || plain_solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenSolveFailure, "symmetric eigensolver did not converge");
  }

  SpectralSummary s;
  s.lambda2 = scaled_solver.eigenvalues()(1);
  s.lambdaN = scaled_solver.eigenvalues()(n - 1);
  s.lambda2_L = plain_solver.eigenvalues()(1);

  const Eigen::MatrixXd y = inertia_basis(net.inertia());
  const Eigen::MatrixXd ay = mats.incidence.transpose() * inv_sqrt_m.asDiagonal() * y;
  s.norm_AY = ay.rowwise().norm().maxCoeff();
  return s;
}

PowerNetwork kron_reduce(const PowerNetwork& net, std::span<const std::size_t> keep) {
  if (keep.empty()) throw Error(ErrorCode::EmptyKeepSet, "Kron reduction needs at least one kept bus");
  const std::size_t n = net.bus_count();
  std::vector<char> kept(n, 0);
  for (const auto k : keep) {
    if (k >= n) throw Error(ErrorCode::UnknownBus, "kept bus index out of range");
    if (kept[k]) throw Error(ErrorCode::UnknownBus, "kept bus listed twice");
    kept[k] = 1;
  }
  std::vector<std::size_t> elim;
  for (std::size_t i = 0; i < n; ++i) {
    if (!kept[i]) elim.push_back(i);
  }

  const Eigen::MatrixXd lap = laplacian(net);
  const auto nk = static_cast<Eigen::Index>(keep.size());
  const auto ne = static_cast<Eigen::Index>(elim.size());
  Eigen::MatrixXd reduced(nk, nk);
  for (Eigen::Index a = 0; a < nk; ++a) {
    for (Eigen::Index b = 0; b < nk; ++b) {
      reduced(a, b) = lap(static_cast<Eigen::Index>(keep[static_cast<std::size_t>(a)]),
                          static_cast<Eigen::Index>(keep[static_cast<std::size_t>(b)]));
    }
  }
  if (ne > 0) {
    Eigen::MatrixXd lee(ne, ne);
    Eigen::MatrixXd lek(ne, nk);
    for (Eigen::Index a = 0; a < ne; ++a) {
      const auto ia = static_cast<Eigen::Index>(elim[static_cast<std::size_t>(a)]);
      for (Eigen::Index b = 0; b < ne; ++b) {
        lee(a, b) = lap(ia, static_cast<Eigen::Index>(elim[static_cast<std::size_t>(b)]));
      }
      for (Eigen::Index b = 0; b < nk; ++b) {
        lek(a, b) = lap(ia, static_cast<Eigen::Index>(keep[static_cast<std::size_t>(b)]));
      }
    }
    // The interior block is a principal block of a PSD Laplacian: it is
    // nonsingular exactly when it is positive definite.
    Eigen::LLT<Eigen::MatrixXd> llt(lee);
    if (llt.info() != Eigen::Success ||
        llt.matrixL().toDenseMatrix().diagonal().minCoeff() <= 1e-12 * lee.diagonal().maxCoeff()) {
      throw Error(ErrorCode::SingularInteriorBlock,
                  "eliminated buses form a component with no kept bus");
    }
    reduced -= lek.transpose() * llt.solve(lek);
  }

  std::vector<Line> lines;
  for (Eigen::Index a = 0; a < nk; ++a) {
    for (Eigen::Index b = a + 1; b < nk; ++b) {
      const double w = -0.5 * (reduced(a, b) + reduced(b, a));
      if (w > 1e-12) {
        lines.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), w});
      }
    }
  }
  std::vector<double> inertia;
  std::vector<long> ids;
  for (const auto k : keep) {
    inertia.push_back(net.inertia()[k]);
    ids.push_back(net.ids()[k]);
  }
  if (keep.size() == 1) {
    throw Error(ErrorCode::DisconnectedGraph, "a single kept bus does not form a network");
  }
  return PowerNetwork::build(std::move(inertia), std::move(lines), std::move(ids), net.is_baseline());
}

PowerNetwork scale_lines(const PowerNetwork& net, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::NonPositiveScale, "line scale factor must be positive");
  }
  auto lines = net.lines();
  for (auto& l : lines) l.sensitivity *= k;
  return PowerNetwork::build(net.inertia(), std::move(lines), net.ids(), net.is_baseline());
}

PowerNetwork random_network(const RandomNetworkSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.buses;
  if (n < 2) throw Error(ErrorCode::DisconnectedGraph, "random network needs at least two buses");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> inertia_dist(spec.inertia_lo, spec.inertia_hi);
  std::uniform_real_distribution<double> sens_dist(spec.sensitivity_lo, spec.sensitivity_hi);

  std::vector<double> inertia(n);
  for (auto& m : inertia) m = inertia_dist(rng);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    auto a = order[i];
    auto b = order[pick(rng)];
    if (a > b) std::swap(a, b);
    edges.emplace(a, b);
  }
  const std::size_t max_edges = n * (n - 1) / 2;
  const std::size_t target = std::min(max_edges, n - 1 + spec.extra_edges);
  std::uniform_int_distribution<std::size_t> bus(0, n - 1);
  while (edges.size() < target) {
    auto a = bus(rng);
    auto b = bus(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges.emplace(a, b);
  }
  std::vector<Line> lines;
  lines.reserve(edges.size());
  for (const auto& [a, b] : edges) lines.push_back({a, b, sens_dist(rng)});
  return PowerNetwork::build(std::move(inertia), std::move(lines));
}

}  // namespace coherency::grid
