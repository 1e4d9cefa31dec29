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

#include "coherency/certify/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace coherency::certify {

namespace {

const std::map<std::string, std::string, std::less<>>& formulas() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"K", "32 N M_b (1 + L/mu)^2 / (min M mu^2)"},
      {"c", "linear: mu l2 / (4 (l2 + 4 L^2)); sinusoidal: eta* l2^2 sin^2 rho / (lN + l2 sin rho)"},
      {"eta_star", "linear: mu l2 / (2 (l2 + 4 L^2)); sinusoidal: 1 / ((2 lN/mu)(1 + 2 lN L^2/(k l2^2 sin^2 rho))"
                   " + sqrt(2 lN^2 / (k l2 sin rho)))"},
      {"limiting_term", "K C^2 (l2 + 4 L^2)^2 / l2^3"},
      {"limiting_term_lim", "K C_lim^2 (l2 + 4 L^2)^2 / l2^3"},
      {"V0", "V(0+), Lyapunov value at the initial state"},
      {"beta1", "2 N L^2 |f_b(w_b(0)) + xi_b(0+)|^2 / (eta* l2 M_b)"},
      {"alpha", "linear: (2 / min M)(V(0+) + 2 beta1 / (3 mu)); sinusoidal: 4 V_bar(0+) / min M"},
      {"phi1", "1 / (min M)^2"},
      {"phi2", "16 L^2 / (3 mu^2 M_b min M)"},
      {"alpha_star", "linear: ((phi1 + phi2) l2 + 4 phi2 L^2) / l2^2; sinusoidal: 4 zeta1 / min M"},
      {"phi1_k", "1 / (k eta* l2^2 sin^2 rho)"},
      {"phi2_k", "eta* l2^2 sin^2 rho / (4 k lN^2 L^2)"},
      {"beta", "8 (phi1_k + phi2_k) N M_b (1 + L/mu)^2 / (c min M)"},
      {"V_c", "(k l2 sin rho - eta*^2 lN^2) rho^2 / (2 |A^T M^-1/2 Y|_{2->inf}^2)"},
      {"C_bar", "sqrt(c rho^2 (k l2 sin rho - eta*^2 lN^2) / (4 N M_b (1 + L/mu)^2 |A^T M^-1/2 Y|^2 (phi1_k + phi2_k)))"},
      {"phi3_offset", "k l2_L cos(2 rho) / (8 L max M)"},
      {"V_bar", "V(0+) + 2 N L^2 (phi1_k + phi2_k) |f_b(w_b(0)) + xi_b(0+)|^2 / (M_b (2 mu - c))"},
      {"omega_b0", "inertia-weighted mean of w(0)"},
      {"omega_b0_limit", "|xi_b(0+)| / (mu M_b) + phi3_offset"},
      {"zeta1", "lN / (2 k min M (l2 sin rho)^2) + 2 L^2 (phi1_k + phi2_k) / (M_b mu)"},
      {"zeta2", "k l2_L cos(2 rho) mu M_b / (8 L max M)"},
      {"Delta_bar", "min(sqrt(V_c / zeta1), sqrt(N) zeta2)"},
  };
  return table;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

const std::vector<std::string> kCsvConstants = {"c",          "eta_star", "K",     "limiting_term", "alpha",
                                                "alpha_star", "beta",     "V_c",   "C_bar",         "Delta_bar",
                                                "zeta1",      "zeta2",    "phi1_k", "phi2_k"};
const std::vector<std::string> kCsvInputs = {"lambda2", "mu", "L", "C", "C_lim", "jump", "k", "rho"};

}  // namespace

std::string formula_of(std::string_view constant) {
  const auto at = constant.find('@');
  const auto key = constant.substr(0, at);
  const auto it = formulas().find(key);
  return it == formulas().end() ? std::string{} : it->second;
}

nlohmann::json certificate_json(const BoundCertificate& cert, const VerifyReport* verdict) {
  nlohmann::json j;
  j["certificate"] = cert.name();
  j["flow"] = engine::to_string(cert.flow);
  j["network_fingerprint"] = cert.network_fingerprint;
  j["rate"] = number(cert.rate);
  j["floor"] = number(cert.floor);
  j["valid_until"] = number(cert.valid_until);
  j["requires_steady_init"] = cert.requires_steady_init;
  auto& constants = j["constants"] = nlohmann::json::array();
  for (const auto& [name, value] : cert.constants) {
    constants.push_back({{"name", name}, {"value", number(value)}, {"formula", formula_of(name)}});
  }
  auto& inputs = j["inputs"] = nlohmann::json::object();
  for (const auto& [name, value] : cert.provenance) inputs[name] = number(value);
  auto& segs = j["segments"] = nlohmann::json::array();
  for (const auto& s : cert.segments) segs.push_back({{"start", s.start}, {"coeff", number(s.coeff)}});
  j["failed_conditions"] = cert.failed_conditions;
  if (verdict) {
    nlohmann::json v;
    v["holds"] = verdict->holds;
    v["checked"] = verdict->checked;
    v["worst_margin"] = number(verdict->worst_margin);
    v["worst_ratio"] = number(verdict->worst_ratio);
    v["violations"] = verdict->violation_times.size();
    if (!verdict->violation_times.empty()) v["first_violation"] = verdict->violation_times.front();
    if (verdict->fitted_alpha) v["fitted_alpha"] = *verdict->fitted_alpha;
    j["verdict"] = v;
  }
  return j;
}

std::string certificate_text(const BoundCertificate& cert, const VerifyReport* verdict) {
  std::ostringstream os;
  os << "certificate " << cert.name() << " (" << engine::to_string(cert.flow) << " flow)\n";
  os << "bound(t) = coeff * exp(-" << fmt(cert.rate) << " (t - start)) + " << fmt(cert.floor);
  if (std::isfinite(cert.valid_until)) os << ", valid for t <= " << fmt(cert.valid_until);
  os << "\n";
  for (const auto& s : cert.segments) os << "  segment start " << fmt(s.start) << " coeff " << fmt(s.coeff) << "\n";
  os << "constants:\n";
  for (const auto& [name, value] : cert.constants) {
    os << "  " << name << " = " << fmt(value);
    if (const auto f = formula_of(name); !f.empty()) os << "    [" << f << "]";
    os << "\n";
  }
  os << "inputs:\n";
  for (const auto& [name, value] : cert.provenance) os << "  " << name << " = " << fmt(value) << "\n";
  for (const auto& f : cert.failed_conditions) os << "FAILED CONDITION: " << f << "\n";
  if (verdict) {
    os << "verdict: " << (verdict->holds ? "holds" : "VIOLATED") << " on " << verdict->checked
       << " samples, worst margin " << fmt(verdict->worst_margin) << ", worst ratio " << fmt(verdict->worst_ratio)
       << "\n";
    if (verdict->fitted_alpha) os << "fitted alpha (not closed form) = " << fmt(*verdict->fitted_alpha) << "\n";
  }
  return os.str();
}

std::vector<std::string> csv_columns() {
  std::vector<std::string> cols = {"scenario", "certificate"};
  cols.insert(cols.end(), kCsvInputs.begin(), kCsvInputs.end());
  cols.insert(cols.end(), kCsvConstants.begin(), kCsvConstants.end());
  cols.insert(cols.end(), {"failed_conditions", "holds", "checked", "worst_margin", "worst_ratio"});
  return cols;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : csv_columns()) out += (out.empty() ? "" : ",") + c;
  return out;
}

std::string csv_row(const std::string& scenario, const BoundCertificate& cert, const VerifyReport* verdict) {
  std::ostringstream os;
  os << scenario << "," << cert.name();
  auto put = [&](double v) { os << "," << (std::isnan(v) ? std::string{} : fmt(v)); };
  for (const auto& name : kCsvInputs) put(lookup(cert.provenance, name));
  for (const auto& name : kCsvConstants) put(lookup(cert.constants, name));
  os << "," << cert.failed_conditions.size();
  if (verdict) {
    os << "," << (verdict->holds ? 1 : 0) << "," << verdict->checked;
    put(verdict->worst_margin);
    put(verdict->worst_ratio);
  } else {
    os << ",,,,";
  }
  return os.str();
}

}  // namespace coherency::certify
