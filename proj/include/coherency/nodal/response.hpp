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

#include <span>
#include <string>
#include <vector>

namespace coherency::nodal {

struct Eval {
  double value = 0.0;
  double slope = 0.0;
};

/// Nodal frequency response f_i(w). Closed-form kinds are exact; the
/// tabulated kind is a monotone (Fritsch-Carlson) cubic through the samples.
/// Every kind is shifted so that f(0) = 0.
class ResponseFunction {
 public:
  enum class Kind { Linear, Saturated, Tabulated };

  /// f(w) = -D w
  static ResponseFunction linear(double D);
  /// f(w) = -D w - s D tanh(w)
  static ResponseFunction saturated(double D, double s);
  /// Samples must be sorted by w, span w = 0 and have at least two points.
  static ResponseFunction tabulated(std::vector<double> omega, std::vector<double> value);

  Kind kind() const noexcept { return kind_; }
  double damping() const noexcept { return D_; }
  double saturation() const noexcept { return s_; }
  const std::vector<double>& knots() const noexcept { return x_; }
  const std::vector<double>& knot_values() const noexcept { return y_; }

  /// Throws OutOfTabulatedRange outside the table of a tabulated kind.
  Eval eval(double omega) const;
  double operator()(double omega) const { return eval(omega).value; }

  /// Same response with every value multiplied by `factor` (> 0).
  ResponseFunction scaled(double factor) const;

  std::string describe() const;

 private:
  ResponseFunction() = default;

  Kind kind_ = Kind::Linear;
  double D_ = 0.0;
  double s_ = 0.0;
  std::vector<double> x_, y_, m_;  // tabulated knots, values, knot slopes
};

Eval eval_response(const ResponseFunction& rf, double omega);

struct SectorBounds {
  double mu = 0.0;
  double L = 0.0;
  double lo = -1.0;  // certified frequency interval
  double hi = 1.0;
};

inline constexpr std::size_t kSectorScanPoints = 10000;

/// Scans -f_i'(w)/M_i on an evenly spaced grid over [lo, hi]; mu is the
/// minimum times 0.999, L the maximum times 1.001. Throws
/// AssumptionOneViolated when the scanned minimum is not positive.
SectorBounds sector_bounds(std::span<const ResponseFunction> rfs, std::span<const double> inertia,
                           double lo = -10.0, double hi = 10.0);

/// Mean of the nodal values and slopes.
Eval blended_response(std::span<const ResponseFunction> rfs, double omega);

/// Solves f_b(w) = y. `mean_inertia` and `mu` seed the bracket.
/// Throws NoBracket or NotMonotone.
double invert_blended(std::span<const ResponseFunction> rfs, double mean_inertia, double mu, double y);

}  // namespace coherency::nodal
