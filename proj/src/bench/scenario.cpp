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

#include "coherency/bench/scenario.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "coherency/bench/cases.hpp"
#include "coherency/certify/steady_state.hpp"
#include "coherency/error.hpp"
#include "coherency/grid/network_io.hpp"

namespace coherency::bench {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaViolation, what); }

void allow_keys(const json& obj, std::initializer_list<std::string_view> keys, const std::string& where) {
  if (!obj.is_object()) schema(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const auto k : keys) known = known || key == k;
    if (!known) schema("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) schema(where + " is missing '" + key + "'");
  if (!obj[key].is_number()) schema(where + "." + key + " must be a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::pair<double, double> range_or(const json& obj, const char* key, std::pair<double, double> fallback,
                                   const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& r = obj[key];
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
    schema(where + "." + key + " must be [lo, hi]");
  }
  return {r[0].get<double>(), r[1].get<double>()};
}

std::vector<double> numbers(const json& arr, const std::string& where) {
  if (!arr.is_array()) schema(where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) schema(where + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& value, const std::string& where) {
  if (!value.is_string()) schema(where + " must be a path string");
  std::filesystem::path p = value.get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  if (!std::filesystem::exists(p)) throw Error(ErrorCode::MissingFile, where + ": no such file " + p.string());
  return p;
}

std::size_t bus_index(const grid::PowerNetwork& net, const json& id, const std::string& where) {
  if (!id.is_number_integer()) schema(where + " must be an integer bus id");
  try {
    return net.index_of(id.get<long>());
  } catch (const Error&) {
    schema(where + " refers to bus " + std::to_string(id.get<long>()) + ", not in the " +
           std::to_string(net.bus_count()) + "-bus network");
  }
}

grid::PowerNetwork network_of(const json& doc, const std::filesystem::path& base, std::string& source) {
  const std::string where = "network";
  if (!doc.is_object() || doc.size() != 1) schema("network needs exactly one of inline, file, matpower, random, surrogate");
  const auto& [kind, body] = *doc.items().begin();
  if (kind == "inline") {
    source = "inline";
    try {
      return grid::network_from_json(body);
    } catch (const json::exception& e) {
      schema(std::string("network.inline: ") + e.what());
    }
  }
  if (kind == "file") {
    const auto path = resolve(base, body, "network.file");
    source = "file:" + path.string();
    return grid::load_network_json(path);
  }
  if (kind == "matpower") {
    allow_keys(body, {"path", "inertia", "inertia_by_bus"}, "network.matpower");
    if (!body.contains("path")) schema("network.matpower is missing 'path'");
    const auto path = resolve(base, body["path"], "network.matpower.path");
    std::map<long, double> per_bus;
    if (body.contains("inertia_by_bus")) {
      if (!body["inertia_by_bus"].is_object()) schema("network.matpower.inertia_by_bus must be an object");
      for (const auto& [id, m] : body["inertia_by_bus"].items()) {
        if (!m.is_number()) schema("network.matpower.inertia_by_bus values must be numbers");
        try {
          per_bus[std::stol(id)] = m.get<double>();
        } catch (const std::exception&) {
          schema("network.matpower.inertia_by_bus keys must be bus ids");
        }
      }
    }
    source = "matpower:" + path.string();
    return grid::matpower_network(grid::read_matpower(path), number(body, "inertia", "network.matpower"),
                                  per_bus);
  }
  if (kind == "random") {
    allow_keys(body, {"buses", "N", "extra_edges", "seed", "inertia", "sensitivity"}, "network.random");
    grid::RandomNetworkSpec spec;
    const char* n_key = body.contains("N") ? "N" : "buses";
    spec.buses = static_cast<std::size_t>(number_or(body, n_key, static_cast<double>(spec.buses), where));
    spec.extra_edges =
        static_cast<std::size_t>(number_or(body, "extra_edges", static_cast<double>(spec.extra_edges), where));
    std::tie(spec.inertia_lo, spec.inertia_hi) =
        range_or(body, "inertia", {spec.inertia_lo, spec.inertia_hi}, "network.random");
    std::tie(spec.sensitivity_lo, spec.sensitivity_hi) =
        range_or(body, "sensitivity", {spec.sensitivity_lo, spec.sensitivity_hi}, "network.random");
    source = "random";
    return grid::random_network(spec, static_cast<std::uint64_t>(number_or(body, "seed", 0, where)));
  }
  if (kind == "surrogate") {
    allow_keys(body, {"seed"}, "network.surrogate");
    source = "surrogate-35";
    return surrogate_network(
        static_cast<std::uint64_t>(number_or(body, "seed", static_cast<double>(kSurrogateSeed), where)));
  }
  schema("unknown network source '" + kind + "'");
}

nodal::ResponseFunction response_of(const json& spec, const std::string& where) {
  allow_keys(spec, {"kind", "D", "s", "omega", "value", "bus"}, where);
  const std::string kind = spec.value("kind", "linear");
  if (kind == "linear") return nodal::ResponseFunction::linear(number(spec, "D", where));
  if (kind == "saturated") {
    return nodal::ResponseFunction::saturated(number(spec, "D", where), number(spec, "s", where));
  }
  if (kind == "tabulated") {
    if (!spec.contains("omega") || !spec.contains("value")) schema(where + " needs omega and value arrays");
    return nodal::ResponseFunction::tabulated(numbers(spec["omega"], where + ".omega"),
                                              numbers(spec["value"], where + ".value"));
  }
  schema(where + ": unknown response kind '" + kind + "'");
}

std::vector<nodal::ResponseFunction> responses_of(const json& doc, const grid::PowerNetwork& net) {
  const auto n = net.bus_count();
  std::vector<nodal::ResponseFunction> out;
  bool by_inertia = false;
  if (doc.is_array()) {
    if (doc.size() != n) schema("responses lists " + std::to_string(doc.size()) + " entries for " + std::to_string(n) + " buses");
    for (std::size_t i = 0; i < n; ++i) out.push_back(response_of(doc[i], "responses[" + std::to_string(i) + "]"));
    return out;
  }
  if (!doc.is_object()) schema("responses must be an object or an array");
  if (doc.contains("random")) {
    allow_keys(doc, {"random", "scale_by_inertia"}, "responses");
    const auto& r = doc["random"];
    allow_keys(r, {"kind", "D", "s", "seed"}, "responses.random");
    const auto [lo, hi] = range_or(r, "D", {1.0, 4.0}, "responses.random");
    const std::string kind = r.value("kind", "linear");
    if (kind != "linear" && kind != "saturated") schema("responses.random.kind must be linear or saturated");
    const double s = number_or(r, "s", 0.0, "responses.random");
    std::mt19937_64 rng(static_cast<std::uint64_t>(number_or(r, "seed", 0, "responses.random")));
    std::uniform_real_distribution<double> U(lo, hi);
    for (std::size_t i = 0; i < n; ++i) {
      const double D = U(rng);
      out.push_back(kind == "linear" ? nodal::ResponseFunction::linear(D) : nodal::ResponseFunction::saturated(D, s));
    }
    by_inertia = doc.value("scale_by_inertia", false);
  } else if (doc.contains("default") || doc.contains("buses") || doc.contains("scale_by_inertia")) {
    allow_keys(doc, {"default", "buses", "scale_by_inertia"}, "responses");
    if (!doc.contains("default")) schema("responses needs a default entry");
    const auto base = response_of(doc["default"], "responses.default");
    out.assign(n, base);
    if (doc.contains("buses")) {
      if (!doc["buses"].is_array()) schema("responses.buses must be an array");
      for (const auto& entry : doc["buses"]) {
        if (!entry.is_object() || !entry.contains("bus")) schema("responses.buses entries need a bus id");
        out[bus_index(net, entry["bus"], "responses.buses.bus")] = response_of(entry, "responses.buses");
      }
    }
    by_inertia = doc.value("scale_by_inertia", false);
  } else {
    out.assign(n, response_of(doc, "responses"));
  }
  if (by_inertia) {
    for (std::size_t i = 0; i < n; ++i) out[i] = out[i].scaled(net.inertia()[i]);
  }
  return out;
}

signals::Term term_of(const json& t, const std::string& where) {
  allow_keys(t, {"kind", "a", "h", "r", "b", "omega", "phase"}, where);
  if (!t.contains("kind") || !t["kind"].is_string()) schema(where + " needs a kind");
  const auto kind = t["kind"].get<std::string>();
  if (kind == "constant") return signals::Term::constant(number(t, "a", where));
  if (kind == "step") return signals::Term::step(number(t, "h", where));
  if (kind == "ramp") return signals::Term::ramp(number(t, "a", where), number(t, "r", where));
  if (kind == "sinusoid") {
    return signals::Term::sinusoid(number(t, "b", where), number(t, "omega", where), number_or(t, "phase", 0, where));
  }
  schema(where + ": unknown term kind '" + kind + "'");
}

std::vector<signals::Term> terms_of(const json& arr, const std::string& where) {
  if (!arr.is_array()) schema(where + " must be an array of terms");
  std::vector<signals::Term> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(term_of(arr[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::VectorXd bus_vector(const json& v, std::size_t n, const std::string& where) {
  if (v.is_number()) return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), v.get<double>());
  const auto xs = numbers(v, where);
  if (xs.size() != n) schema(where + " has " + std::to_string(xs.size()) + " entries for " + std::to_string(n) + " buses");
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(n));
}

signals::DisturbanceProfile profile_of(const json& doc, const grid::PowerNetwork& net, std::uint64_t seed) {
  const auto n = net.bus_count();
  if (!doc.is_object()) schema("disturbance must be an object");
  if (doc.contains("constant")) {
    allow_keys(doc, {"constant", "scale_by_inertia"}, "disturbance");
    Eigen::VectorXd xi = bus_vector(doc["constant"], n, "disturbance.constant");
    if (doc.value("scale_by_inertia", false)) {
      for (std::size_t i = 0; i < n; ++i) xi(static_cast<Eigen::Index>(i)) *= net.inertia()[i];
    }
    return signals::DisturbanceProfile::constant(xi);
  }
  if (doc.contains("two_stage")) {
    allow_keys(doc, {"two_stage"}, "disturbance");
    const auto& ts = doc["two_stage"];
    allow_keys(ts, {"seed", "t_switch", "a", "r", "delta", "b", "omega", "delta_scale", "omega_scale", "b_scale"},
               "disturbance.two_stage");
    signals::TwoStageRanges rg;
    const std::string w = "disturbance.two_stage";
    std::tie(rg.a_lo, rg.a_hi) = range_or(ts, "a", {rg.a_lo, rg.a_hi}, w);
    std::tie(rg.r_lo, rg.r_hi) = range_or(ts, "r", {rg.r_lo, rg.r_hi}, w);
    std::tie(rg.delta_lo, rg.delta_hi) = range_or(ts, "delta", {rg.delta_lo, rg.delta_hi}, w);
    std::tie(rg.b_lo, rg.b_hi) = range_or(ts, "b", {rg.b_lo, rg.b_hi}, w);
    rg.omega = number_or(ts, "omega", rg.omega, w);
    rg.t_switch = number_or(ts, "t_switch", rg.t_switch, w);
    auto buses = signals::sample_two_stage(n, rg, static_cast<std::uint64_t>(number_or(ts, "seed", static_cast<double>(seed), w)));
    const double ds = number_or(ts, "delta_scale", 1.0, w);
    const double os = number_or(ts, "omega_scale", 1.0, w);
    const double bs = number_or(ts, "b_scale", 1.0, w);
    for (auto& b : buses) {
      b.delta *= ds;
      b.omega *= os;
      b.b *= bs;
    }
    return signals::two_stage_profile(buses, rg.t_switch);
  }
  allow_keys(doc, {"pre", "stages"}, "disturbance");
  if (!doc.contains("stages") || !doc["stages"].is_array() || doc["stages"].empty()) {
    schema("disturbance needs constant, two_stage or a non-empty stages array");
  }
  Eigen::VectorXd pre = doc.contains("pre") ? bus_vector(doc["pre"], n, "disturbance.pre")
                                            : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<double> starts;
  std::vector<signals::DisturbanceProfile::StageTerms> stages;
  for (std::size_t s = 0; s < doc["stages"].size(); ++s) {
    const auto& st = doc["stages"][s];
    const std::string w = "disturbance.stages[" + std::to_string(s) + "]";
    allow_keys(st, {"start", "all", "buses"}, w);
    starts.push_back(number(st, "start", w));
    signals::DisturbanceProfile::StageTerms terms(n);
    if (st.contains("all")) {
      const auto common = terms_of(st["all"], w + ".all");
      for (auto& t : terms) t = common;
    }
    if (st.contains("buses")) {
      if (!st["buses"].is_array()) schema(w + ".buses must be an array");
      for (const auto& entry : st["buses"]) {
        allow_keys(entry, {"bus", "terms"}, w + ".buses");
        if (!entry.contains("bus") || !entry.contains("terms")) schema(w + ".buses entries need bus and terms");
        auto& slot = terms[bus_index(net, entry["bus"], w + ".buses.bus")];
        const auto extra = terms_of(entry["terms"], w + ".buses.terms");
        slot.insert(slot.end(), extra.begin(), extra.end());
      }
    }
    stages.push_back(std::move(terms));
  }
  try {
    return signals::DisturbanceProfile::build(n, starts, stages, pre);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidProfile) schema(std::string("disturbance: ") + e.what());
    throw;
  }
}

engine::InitKind init_kind_of(const std::string& name) {
  if (name == "zero") return engine::InitKind::Zero;
  if (name == "random") return engine::InitKind::Random;
  if (name == "steady") return engine::InitKind::Steady;
  if (name == "explicit") return engine::InitKind::Explicit;
  schema("init.kind must be zero, random, steady or explicit");
}

certify::BoundCertificate::Kind certificate_kind(const json& v) {
  if (!v.is_string()) schema("certificates must be names");
  const auto s = v.get<std::string>();
  if (s == "T1") return certify::BoundCertificate::Kind::T1;
  if (s == "P1") return certify::BoundCertificate::Kind::P1;
  if (s == "T2") return certify::BoundCertificate::Kind::T2;
  if (s == "P2") return certify::BoundCertificate::Kind::P2;
  schema("unknown certificate '" + s + "'");
}

void fnv(std::uint64_t& h, const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
}

Scenario build(const json& doc, const std::filesystem::path& base) {
  allow_keys(doc, {"name", "seed", "network", "responses", "disturbance", "flow", "rho", "sector", "init",
                   "integrator", "horizon", "certificates", "output"},
             "scenario");
  Scenario s;
  s.source = doc;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) schema("name must be a string");
    s.name = doc["name"].get<std::string>();
  }
  s.seed = static_cast<std::uint64_t>(number_or(doc, "seed", 0, "scenario"));
  if (!doc.contains("network")) schema("scenario is missing 'network'");
  s.network = network_of(doc["network"], base, s.network_source);
  const auto& net = *s.network;
  if (!doc.contains("responses")) schema("scenario is missing 'responses'");
  s.responses = responses_of(doc["responses"], net);
  if (!doc.contains("disturbance")) schema("scenario is missing 'disturbance'");
  s.profile = profile_of(doc["disturbance"], net, s.seed);

  if (doc.contains("flow")) {
    const auto& f = doc["flow"];
    allow_keys(f, {"model", "k"}, "flow");
    const std::string model = f.value("model", "linear");
    const double k = number_or(f, "k", 1.0, "flow");
    if (!(k > 0.0)) schema("flow.k must be positive");
    if (model == "linear") s.flow = engine::Flow::linear(k);
    else if (model == "sinusoidal") s.flow = engine::Flow::sinusoidal(k);
    else schema("flow.model must be linear or sinusoidal");
  }
  if (doc.contains("rho")) {
    const auto& r = doc["rho"];
    if (r.is_string() && r.get<std::string>() == "auto") s.rho.reset();
    else if (r.is_number()) s.rho = r.get<double>();
    else schema("rho must be a number or \"auto\"");
  } else {
    s.rho = M_PI / 8.0;
  }
  if (doc.contains("sector")) {
    allow_keys(doc["sector"], {"lo", "hi"}, "sector");
    s.sector_lo = number_or(doc["sector"], "lo", s.sector_lo, "sector");
    s.sector_hi = number_or(doc["sector"], "hi", s.sector_hi, "sector");
    if (!(s.sector_lo < 0.0 && s.sector_hi > 0.0)) schema("sector must straddle zero");
  }
  if (doc.contains("init")) {
    const auto& in = doc["init"];
    allow_keys(in, {"kind", "spread", "seed", "theta", "omega"}, "init");
    s.init.kind = init_kind_of(in.value("kind", "zero"));
    s.init.spread = number_or(in, "spread", s.init.spread, "init");
    s.init.seed = static_cast<std::uint64_t>(number_or(in, "seed", static_cast<double>(s.seed), "init"));
    const auto n = net.bus_count();
    if (s.init.kind == engine::InitKind::Explicit) {
      if (!in.contains("theta") || !in.contains("omega")) schema("explicit init needs theta and omega");
      s.init.theta = bus_vector(in["theta"], n, "init.theta");
      s.init.omega = bus_vector(in["omega"], n, "init.omega");
    }
  }
  if (doc.contains("integrator")) {
    const auto& ig = doc["integrator"];
    allow_keys(ig, {"method", "rel_tol", "abs_tol", "max_step", "fixed_step"}, "integrator");
    const std::string m = ig.value("method", "dp45");
    if (m == "dp45") s.integrator.method = engine::IntegratorConfig::Method::DormandPrince45;
    else if (m == "rk4") s.integrator.method = engine::IntegratorConfig::Method::RK4;
    else schema("integrator.method must be dp45 or rk4");
    s.integrator.rel_tol = number_or(ig, "rel_tol", s.integrator.rel_tol, "integrator");
    s.integrator.abs_tol = number_or(ig, "abs_tol", s.integrator.abs_tol, "integrator");
    s.integrator.max_step = number_or(ig, "max_step", s.integrator.max_step, "integrator");
    s.integrator.fixed_step = number_or(ig, "fixed_step", s.integrator.fixed_step, "integrator");
  }
  if (doc.contains("horizon")) {
    allow_keys(doc["horizon"], {"t_end", "dt"}, "horizon");
    s.t_end = number_or(doc["horizon"], "t_end", s.t_end, "horizon");
    s.dt = number_or(doc["horizon"], "dt", s.dt, "horizon");
    if (!(s.t_end > 0.0 && s.dt > 0.0)) schema("horizon t_end and dt must be positive");
  }
  if (doc.contains("certificates")) {
    if (!doc["certificates"].is_array()) schema("certificates must be an array");
    for (const auto& c : doc["certificates"]) s.certificates.push_back(certificate_kind(c));
  }
  if (doc.contains("output")) {
    allow_keys(doc["output"], {"dir", "angles"}, "output");
    if (doc["output"].contains("dir")) {
      if (!doc["output"]["dir"].is_string()) schema("output.dir must be a string");
      s.out_dir = doc["output"]["dir"].get<std::string>();
      if (s.out_dir.is_relative() && !base.empty()) s.out_dir = base / s.out_dir;
    }
    s.write_angles = doc["output"].value("angles", true);
  }
  s.hash = scenario_hash(s);
  return s;
}

}  // namespace

Scenario scenario_from_json(const json& doc, const std::filesystem::path& base_dir) {
  try {
    return build(doc, base_dir);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, e.what());
  }
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const auto stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  return scenario_from_json(doc, base_dir);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

std::uint64_t scenario_hash(const Scenario& s) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto text = s.source.dump();
  fnv(h, text.data(), text.size());
  if (s.network) {
    const auto fp = s.network->fingerprint();
    fnv(h, &fp, sizeof fp);
  }
  return h;
}

engine::InitialState make_initial_state(const Scenario& s, const nodal::SectorBounds& bounds, double rho) {
  const auto& net = s.net();
  const auto n = static_cast<Eigen::Index>(net.bus_count());
  engine::InitialState init;
  init.kind = s.init.kind;
  switch (s.init.kind) {
    case engine::InitKind::Zero:
      init.theta = Eigen::VectorXd::Zero(n);
      init.omega = Eigen::VectorXd::Zero(n);
      break;
    case engine::InitKind::Random: {
      std::mt19937_64 rng(s.init.seed);
      std::uniform_real_distribution<double> U(-s.init.spread, s.init.spread);
      init.theta.resize(n);
      init.omega.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) init.theta(i) = U(rng);
      for (Eigen::Index i = 0; i < n; ++i) init.omega(i) = U(rng);
      break;
    }
    case engine::InitKind::Explicit:
      if (s.init.theta.size() != n || s.init.omega.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "explicit initial state has the wrong size");
      }
      init.theta = s.init.theta;
      init.omega = s.init.omega;
      break;
    case engine::InitKind::Steady: {
      const auto& xi = s.disturbance().pre();
      const auto ss = s.flow.kind == engine::Flow::Kind::Linear
                          ? certify::steady_state_linear(grid::scale_lines(net, s.flow.k), s.responses, bounds, xi)
                          : certify::steady_state_nonlinear(net, s.responses, bounds, xi, s.flow.k, rho);
      init.theta = ss.theta;
      init.omega = Eigen::VectorXd::Constant(n, ss.omega_s);
      break;
    }
  }
  return init;
}

}  // namespace coherency::bench
