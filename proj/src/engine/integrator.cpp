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

#include "coherency/engine/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coherency/error.hpp"

namespace coherency::engine {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

void check_finite(const Eigen::VectorXd& y, double t) {
  if (!y.allFinite()) {
    throw Error(ErrorCode::NonFiniteState, "state became non-finite at t = " + std::to_string(t));
  }
}

Eigen::VectorXd integrate_dp45(const Rhs& rhs, double t0, Eigen::VectorXd y, double t1,
                               std::span<const double> outputs, const Observer& observe,
                               const IntegratorConfig& cfg, IntegrationStats& st) {
  const Eigen::Index n = y.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  Eigen::VectorXd r1(n), r2(n), r3(n), r4(n), r5(n);
  std::size_t next_out = 0;
  auto emit_until = [&](double t_lo, double t_hi, double h, bool dense) {
    while (next_out < outputs.size() && outputs[next_out] <= t_hi) {
      const double to = outputs[next_out];
      if (to < t_lo) {
        ++next_out;
        continue;
      }
      if (!dense || to == t_hi) {
        observe(next_out, to, dense ? ynew : y);
      } else {
        const double s = (to - t_lo) / h;
        const double s1 = 1.0 - s;
        ytmp = r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
        observe(next_out, to, ytmp);
      }
      ++next_out;
    }
  };

  double t = t0;
  rhs(t, y, k1);
  ++st.rhs_calls;
  emit_until(t, t, 1.0, false);
  if (t1 <= t0) return y;

  const double span = t1 - t0;
  // Starting step from the Hairer-Wanner heuristic.
  double h;
  {
    const Eigen::ArrayXd sc = cfg.abs_tol + cfg.rel_tol * y.array().abs();
    const double d0 = std::sqrt((y.array() / sc).square().mean());
    const double dd1 = std::sqrt((k1.array() / sc).square().mean());
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, span);
    ytmp = y + h0 * k1;
    rhs(t + h0, ytmp, k2);
    ++st.rhs_calls;
    const double dd2 = std::sqrt(((k2 - k1).array() / sc).square().mean()) / h0;
    const double h1 = std::max(dd1, dd2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                 : std::pow(0.01 / std::max(dd1, dd2), 0.2);
    h = std::min({100.0 * h0, h1, span, cfg.max_step});
  }

  bool last_rejected = false;
  while (t < t1) {
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw Error(ErrorCode::StepSizeUnderflow, "step size underflow at t = " + std::to_string(t));
    }
    bool final_step = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      final_step = true;
    }
    ytmp = y + h * a21 * k1;
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const double tnew = final_step ? t1 : t + h;
    rhs(tnew, ynew, k7);
    st.rhs_calls += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Eigen::ArrayXd sc = cfg.abs_tol + cfg.rel_tol * y.array().abs().max(ynew.array().abs());
    const double enorm = std::sqrt((err.array() / sc).square().mean());
    if (!std::isfinite(enorm)) {
      if (!ynew.allFinite() && h < 1e-10) check_finite(ynew, tnew);
      h *= 0.1;
      last_rejected = true;
      ++st.rejected;
      continue;
    }
    if (enorm <= 1.0) {
      r1 = y;
      r2 = ynew - y;
      r3 = h * k1 - r2;
      r4 = r2 - h * k7 - r3;
      r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      check_finite(ynew, tnew);
      emit_until(t, tnew, h, true);
      t = tnew;
      y = ynew;
      k1 = k7;
      ++st.steps;
      double fac = enorm == 0.0 ? 5.0 : 0.9 * std::pow(enorm, -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h = std::min(h * fac, cfg.max_step);
      last_rejected = false;
    } else {
      const double fac = std::max(0.2, 0.9 * std::pow(enorm, -0.2));
      h *= fac;
      last_rejected = true;
      ++st.rejected;
    }
  }
  return y;
}

Eigen::VectorXd integrate_rk4(const Rhs& rhs, double t0, Eigen::VectorXd y, double t1,
                              std::span<const double> outputs, const Observer& observe,
                              const IntegratorConfig& cfg, IntegrationStats& st) {
  if (!(cfg.fixed_step > 0.0)) throw Error(ErrorCode::StepSizeUnderflow, "fixed step must be positive");
  const Eigen::Index n = y.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto advance = [&](double a, double b) {
    if (b <= a) return;
    const auto m = static_cast<std::size_t>(std::ceil((b - a) / cfg.fixed_step - 1e-9));
    const double h = (b - a) / static_cast<double>(std::max<std::size_t>(m, 1));
    double t = a;
    for (std::size_t j = 0; j < std::max<std::size_t>(m, 1); ++j) {
      rhs(t, y, k1);
      tmp = y + 0.5 * h * k1;
      rhs(t + 0.5 * h, tmp, k2);
      tmp = y + 0.5 * h * k2;
      rhs(t + 0.5 * h, tmp, k3);
      tmp = y + h * k3;
      const double tn = j + 1 == std::max<std::size_t>(m, 1) ? b : t + h;
      rhs(tn, tmp, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      st.rhs_calls += 4;
      ++st.steps;
      t = tn;
      check_finite(y, t);
    }
  };
  double t = t0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const double to = outputs[k];
    if (to < t0 || to > t1) continue;
    advance(t, to);
    t = std::max(t, to);
    observe(k, to, y);
  }
  advance(t, t1);
  return y;
}

}  // namespace

Eigen::VectorXd integrate(const Rhs& rhs, double t0, Eigen::VectorXd y0, double t1,
                          std::span<const double> outputs, const Observer& observe,
                          const IntegratorConfig& cfg, IntegrationStats* stats) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) {
    throw Error(ErrorCode::StepSizeUnderflow, "tolerances must be positive");
  }
  check_finite(y0, t0);
  IntegrationStats local;
  IntegrationStats& st = stats ? *stats : local;
  const Observer sink = observe ? observe : Observer([](std::size_t, double, const Eigen::VectorXd&) {});
  if (cfg.method == IntegratorConfig::Method::RK4) {
    return integrate_rk4(rhs, t0, std::move(y0), t1, outputs, sink, cfg, st);
  }
  return integrate_dp45(rhs, t0, std::move(y0), t1, outputs, sink, cfg, st);
}

}  // namespace coherency::engine
