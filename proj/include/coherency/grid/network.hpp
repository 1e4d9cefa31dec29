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
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace coherency::grid {

/// Undirected line between two buses. After construction `from < to`, which
/// fixes the incidence orientation (tail = from, head = to).
struct Line {
  std::size_t from = 0;
  std::size_t to = 0;
  double sensitivity = 0.0;  // B_ij, per-unit power per radian
};

/// Validated, immutable power network: connected graph, per-bus inertia and
/// per-line sensitivities. Buses are indexed 0..N-1; external ids are kept
/// for reporting and file round-trips.
class PowerNetwork {
 public:
  /// Throws Error{DisconnectedGraph | NonPositiveParameter | DuplicateEdge |
  /// SelfLoop | UnknownBus}. `ids` defaults to 1..N.
  static PowerNetwork build(std::vector<double> inertia, std::vector<Line> lines,
                            std::vector<long> ids = {}, bool baseline = false);

  std::size_t bus_count() const noexcept { return inertia_.size(); }
  std::size_t line_count() const noexcept { return lines_.size(); }
  const std::vector<double>& inertia() const noexcept { return inertia_; }
  const std::vector<Line>& lines() const noexcept { return lines_; }
  const std::vector<long>& ids() const noexcept { return ids_; }

  /// True when the sensitivities are a baseline B0 meant to be scaled by k.
  bool is_baseline() const noexcept { return baseline_; }

  double mean_inertia() const noexcept;
  double min_inertia() const noexcept;
  double max_inertia() const noexcept;

  /// Index of an external bus id, or throws UnknownBus.
  std::size_t index_of(long id) const;

  /// Stable 64-bit hash of inertia and line data.
  std::uint64_t fingerprint() const noexcept;

 private:
  PowerNetwork() = default;

  std::vector<double> inertia_;
  std::vector<Line> lines_;
  std::vector<long> ids_;
  bool baseline_ = false;
};

struct NetworkMatrices {
  Eigen::MatrixXd laplacian;  // N x N, (L_B)_ij = -B_ij
  Eigen::MatrixXd incidence;  // N x E, +1 at tail, -1 at head
  Eigen::VectorXd weights;    // diagonal of Gamma, E entries
};

NetworkMatrices laplacian_and_incidence(const PowerNetwork& net);
Eigen::MatrixXd laplacian(const PowerNetwork& net);

/// Orthonormal basis Y (N x N-1) of the null space of 1^T M^{1/2}, built as
/// the trailing columns of the Householder reflector that maps e_1 onto the
/// unit vector M^{1/2} 1 / |M^{1/2} 1|.
Eigen::MatrixXd inertia_basis(std::span<const double> inertia);

struct SpectralSummary {
  double lambda2 = 0.0;    // second-smallest eigenvalue of M^-1 L_B
  double lambda2_L = 0.0;  // second-smallest eigenvalue of L_B
  double lambdaN = 0.0;    // largest eigenvalue of M^-1 L_B
  double norm_AY = 0.0;    // 2->inf norm of A^T M^-1/2 Y (max row norm)
};

/// Eigenvalues come from the symmetric similarity M^-1/2 L_B M^-1/2.
SpectralSummary spectral_summary(const PowerNetwork& net);

/// Schur-complement elimination of every bus not in `keep`. The reduced
/// network orders its buses as listed in `keep`. Throws EmptyKeepSet,
/// UnknownBus, SingularInteriorBlock.
PowerNetwork kron_reduce(const PowerNetwork& net, std::span<const std::size_t> keep);

/// Multiplies every sensitivity by k > 0 (NonPositiveScale otherwise).
PowerNetwork scale_lines(const PowerNetwork& net, double k);

struct RandomNetworkSpec {
  std::size_t buses = 10;
  std::size_t extra_edges = 5;
  double inertia_lo = 0.5;
  double inertia_hi = 3.0;
  double sensitivity_lo = 0.5;
  double sensitivity_hi = 2.0;
};

/// Random spanning tree plus `extra_edges` distinct chords (capped at the
/// complete graph), sampled deterministically from `seed`.
PowerNetwork random_network(const RandomNetworkSpec& spec, std::uint64_t seed);

}  // namespace coherency::grid
