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

#include "coherency/nodal/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "coherency/error.hpp"

namespace coherency::nodal {

ResponseFunction ResponseFunction::linear(double D) {
  if (!std::isfinite(D)) throw Error(ErrorCode::NonPositiveParameter, "damping must be finite");
  ResponseFunction rf;
  rf.kind_ = Kind::Linear;
  rf.D_ = D;
  return rf;
}

ResponseFunction ResponseFunction::saturated(double D, double s) {
  if (!std::isfinite(D) || !std::isfinite(s)) {
    throw Error(ErrorCode::NonPositiveParameter, "saturated response parameters must be finite");
  }
  ResponseFunction rf;
  rf.kind_ = Kind::Saturated;
  rf.D_ = D;
  rf.s_ = s;
  return rf;
}

ResponseFunction ResponseFunction::tabulated(std::vector<double> omega, std::vector<double> value) {
  const std::size_t n = omega.size();
  if (n < 2 || value.size() != n) {
    throw Error(ErrorCode::InvalidProfile, "tabulated response needs matching arrays of length >= 2");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!(omega[k] > omega[k - 1])) {
      throw Error(ErrorCode::NotMonotone, "tabulated frequencies must be strictly increasing");
    }
  }
  if (omega.front() > 0.0 || omega.back() < 0.0) {
    throw Error(ErrorCode::OutOfTabulatedRange, "tabulated range must contain w = 0");
  }

  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    delta[k] = (value[k + 1] - value[k]) / (omega[k + 1] - omega[k]);
  }
  std::vector<double> m(n);
  m.front() = delta.front();
  m.back() = delta.back();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    m[k] = delta[k - 1] * delta[k] <= 0.0 ? 0.0 : 0.5 * (delta[k - 1] + delta[k]);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (delta[k] == 0.0) {
      m[k] = m[k + 1] = 0.0;
      continue;
    }
    const double a = m[k] / delta[k];
    const double b = m[k + 1] / delta[k];
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      m[k] = tau * a * delta[k];
      m[k + 1] = tau * b * delta[k];
    }
  }

  ResponseFunction rf;
  rf.kind_ = Kind::Tabulated;
  rf.x_ = std::move(omega);
  rf.y_ = std::move(value);
  rf.m_ = std::move(m);
  const double f0 = rf.eval(0.0).value;
  for (auto& y : rf.y_) y -= f0;
  return rf;
}

Eval ResponseFunction::eval(double omega) const {
  switch (kind_) {
    case Kind::Linear:
      return {-D_ * omega, -D_};
    case Kind::Saturated: {
      const double th = std::tanh(omega);
      return {-D_ * omega - s_ * D_ * th, -D_ - s_ * D_ * (1.0 - th * th)};
    }
    case Kind::Tabulated: {
      if (!(omega >= x_.front() && omega <= x_.back())) {
        throw Error(ErrorCode::OutOfTabulatedRange,
                    "w = " + std::to_string(omega) + " outside the tabulated range");
      }
      auto it = std::upper_bound(x_.begin(), x_.end(), omega);
      std::size_t k = static_cast<std::size_t>(it - x_.begin());
      k = std::clamp<std::size_t>(k, 1, x_.size() - 1) - 1;
      const double h = x_[k + 1] - x_[k];
      const double t = (omega - x_[k]) / h;
      const double t2 = t * t;
      const double t3 = t2 * t;
      const double value = (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * m_[k] +
                           (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * h * m_[k + 1];
      const double slope = (6 * t2 - 6 * t) / h * y_[k] + (3 * t2 - 4 * t + 1) * m_[k] +
                           (-6 * t2 + 6 * t) / h * y_[k + 1] + (3 * t2 - 2 * t) * m_[k + 1];
      return {value, slope};
    }
  }
  return {};
}

ResponseFunction ResponseFunction::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "response scale must be positive");
  ResponseFunction rf = *this;
  rf.D_ *= factor;
  for (auto& y : rf.y_) y *= factor;
  for (auto& m : rf.m_) m *= factor;
  return rf;
}

std::string ResponseFunction::describe() const {
  std::ostringstream ss;
  ss.precision(6);
  switch (kind_) {
    case Kind::Linear:
      ss << "linear(D=" << D_ << ")";
      break;
    case Kind::Saturated:
      ss << "saturated(D=" << D_ << ", s=" << s_ << ")";
      break;
    case Kind::Tabulated:
      ss << "tabulated(" << x_.size() << " knots on [" << x_.front() << ", " << x_.back() << "])";
      break;
  }
  return ss.str();
}

Eval eval_response(const ResponseFunction& rf, double omega) { return rf.eval(omega); }

SectorBounds sector_bounds(std::span<const ResponseFunction> rfs, std::span<const double> inertia,
                           double lo, double hi) {
  if (rfs.size() != inertia.size() || rfs.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "one response function per bus is required");
  }
  if (!(hi > lo)) throw Error(ErrorCode::InvalidProfile, "certified range must be non-empty");
  double lo_ratio = std::numeric_limits<double>::infinity();
  double hi_ratio = -std::numeric_limits<double>::infinity();
  const double step = (hi - lo) / static_cast<double>(kSectorScanPoints - 1);
  for (std::size_t i = 0; i < rfs.size(); ++i) {
    for (std::size_t j = 0; j < kSectorScanPoints; ++j) {
      const double w = j + 1 == kSectorScanPoints ? hi : lo + step * static_cast<double>(j);
      const double r = -rfs[i].eval(w).slope / inertia[i];
      lo_ratio = std::min(lo_ratio, r);
      hi_ratio = std::max(hi_ratio, r);
    }
  }
  if (!(lo_ratio > 0.0)) {
    throw Error(ErrorCode::AssumptionOneViolated,
                "some nodal response has a non-negative slope on the certified range");
  }
  return {0.999 * lo_ratio, 1.001 * hi_ratio, lo, hi};
}

Eval blended_response(std::span<const ResponseFunction> rfs, double omega) {
  Eval sum;
  for (const auto& rf : rfs) {
    const auto e = rf.eval(omega);
    sum.value += e.value;
    sum.slope += e.slope;
  }
  const double n = static_cast<double>(rfs.size());
  return {sum.value / n, sum.slope / n};
}

double invert_blended(std::span<const ResponseFunction> rfs, double mean_inertia, double mu, double y) {
  if (!std::isfinite(y)) throw Error(ErrorCode::NoBracket, "target value is not finite");
  const double gain = mean_inertia * mu;
  const double centre = gain > 0.0 ? -y / gain : 0.0;
  double lo = centre - 1.0;
  double hi = centre + 1.0;
  auto g = [&](double w) { return blended_response(rfs, w).value - y; };
  double glo = g(lo);
  double ghi = g(hi);
  int expansions = 0;
  while (!(glo >= 0.0 && ghi <= 0.0)) {
    if (glo < 0.0 && ghi > 0.0) {
      throw Error(ErrorCode::NotMonotone, "blended response is increasing across the bracket");
    }
    if (++expansions > 60) throw Error(ErrorCode::NoBracket, "no sign change found for f_b(w) = y");
    const double width = hi - lo;
    if (glo < 0.0) {
      lo -= width;
      glo = g(lo);
    }
    if (ghi > 0.0) {
      hi += width;
      ghi = g(hi);
    }
  }
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;

  double w = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const auto e = blended_response(rfs, w);
    const double r = e.value - y;
    if (std::abs(r) < 1e-13 * std::max(1.0, std::abs(y))) return w;
    if (r > 0.0) {
      lo = w;
    } else {
      hi = w;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(w))) {
      return w;
    }
    double next = e.slope < 0.0 ? w - r / e.slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    w = next;
  }
  return w;
}

}  // namespace coherency::nodal
