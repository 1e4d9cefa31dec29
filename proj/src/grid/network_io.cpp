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

#include "coherency/grid/network_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "coherency/error.hpp"

namespace coherency::grid {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool comment = false;
  for (const char ch : text) {
    if (ch == '\n') comment = false;
    if (ch == '%') comment = true;
    if (!comment) out.push_back(ch);
  }
  return out;
}

// Rows of the matrix assigned to `mpc.<name>`; empty when absent.
std::vector<std::vector<double>> matrix_block(const std::string& text, const std::string& name) {
  std::vector<std::vector<double>> rows;
  const std::string key = "mpc." + name;
  std::size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    const std::size_t after = pos + key.size();
    std::size_t j = after;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j < text.size() && text[j] == '=') {
      pos = j;
      break;
    }
    pos = after;
  }
  if (pos == std::string::npos) return rows;
  const auto open = text.find('[', pos);
  const auto close = text.find(']', open);
  if (open == std::string::npos || close == std::string::npos) {
    throw Error(ErrorCode::ParseError, "unterminated matrix for " + key);
  }
  std::string body = text.substr(open + 1, close - open - 1);
  for (auto& ch : body) {
    if (ch == ',') ch = ' ';
    if (ch == '\n') ch = ';';
  }
  std::istringstream rs(body);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::istringstream vs(row);
    std::vector<double> values;
    std::string tok;
    while (vs >> tok) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad number '" + tok + "' in " + key);
      }
    }
    if (!values.empty()) rows.push_back(std::move(values));
  }
  return rows;
}

}  // namespace

PowerNetwork network_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("buses") || !doc.contains("lines")) {
    throw Error(ErrorCode::SchemaViolation, "network needs 'buses' and 'lines' arrays");
  }
  std::vector<double> inertia;
  std::vector<long> ids;
  std::map<long, std::size_t> index;
  for (const auto& bus : doc.at("buses")) {
    if (!bus.contains("id") || !bus.contains("M")) {
      throw Error(ErrorCode::SchemaViolation, "bus entries need 'id' and 'M'");
    }
    const long id = bus.at("id").get<long>();
    if (!index.emplace(id, ids.size()).second) {
      throw Error(ErrorCode::SchemaViolation, "bus id " + std::to_string(id) + " repeated");
    }
    ids.push_back(id);
    inertia.push_back(bus.at("M").get<double>());
  }
  std::vector<Line> lines;
  for (const auto& line : doc.at("lines")) {
    if (!line.contains("from") || !line.contains("to") || !line.contains("B")) {
      throw Error(ErrorCode::SchemaViolation, "line entries need 'from', 'to' and 'B'");
    }
    const long from = line.at("from").get<long>();
    const long to = line.at("to").get<long>();
    const auto a = index.find(from);
    const auto b = index.find(to);
    if (a == index.end() || b == index.end()) {
      throw Error(ErrorCode::SchemaViolation,
                  "line references unknown bus " + std::to_string(a == index.end() ? from : to));
    }
    lines.push_back({a->second, b->second, line.at("B").get<double>()});
  }
  const bool baseline = doc.value("baseline", false);
  return PowerNetwork::build(std::move(inertia), std::move(lines), std::move(ids), baseline);
}

nlohmann::json network_to_json(const PowerNetwork& net) {
  nlohmann::json doc;
  doc["buses"] = nlohmann::json::array();
  for (std::size_t i = 0; i < net.bus_count(); ++i) {
    doc["buses"].push_back({{"id", net.ids()[i]}, {"M", net.inertia()[i]}});
  }
  doc["lines"] = nlohmann::json::array();
  for (const auto& l : net.lines()) {
    doc["lines"].push_back({{"from", net.ids()[l.from]}, {"to", net.ids()[l.to]}, {"B", l.sensitivity}});
  }
  if (net.is_baseline()) doc["baseline"] = true;
  return doc;
}

PowerNetwork load_network_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return network_from_json(doc);
}

void save_network_json(const PowerNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << network_to_json(net).dump(2) << '\n';
}

MatpowerCase parse_matpower(std::string_view raw) {
  const std::string text = strip_comments(raw);
  MatpowerCase mc;
  const auto buses = matrix_block(text, "bus");
  const auto branches = matrix_block(text, "branch");
  const auto gens = matrix_block(text, "gen");
  if (buses.empty()) throw Error(ErrorCode::ParseError, "case has no mpc.bus table");
  if (branches.empty()) throw Error(ErrorCode::ParseError, "case has no mpc.branch table");

  for (const auto& row : buses) mc.bus_ids.push_back(static_cast<long>(row.at(0)));
  for (const auto& row : gens) {
    const bool on = row.size() < 8 || row[7] > 0.0;
    if (on) mc.gen_buses.push_back(static_cast<long>(row.at(0)));
  }

  bool lossy = false, charging = false, taps = false, shifts = false, skipped = false;
  std::map<std::pair<long, long>, double> merged;
  for (const auto& row : branches) {
    if (row.size() < 4) throw Error(ErrorCode::ParseError, "branch row with fewer than 4 columns");
    if (row.size() >= 11 && row[10] <= 0.0) {
      skipped = true;
      continue;
    }
    long a = static_cast<long>(row[0]);
    long b = static_cast<long>(row[1]);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const double x = row[3];
    if (!(std::abs(x) > 0.0)) throw Error(ErrorCode::SchemaViolation, "branch with zero reactance");
    if (row[2] != 0.0) lossy = true;
    if (row.size() > 4 && row[4] != 0.0) charging = true;
    if (row.size() > 8 && row[8] != 0.0 && row[8] != 1.0) taps = true;
    if (row.size() > 9 && row[9] != 0.0) shifts = true;
    merged[{a, b}] += 1.0 / std::abs(x);
  }
  for (const auto& [key, B] : merged) mc.branches.push_back({key.first, key.second, B});
  if (lossy) mc.warnings.emplace_back("branch resistance ignored (lossless lines assumed)");
  if (charging) mc.warnings.emplace_back("line charging susceptance ignored");
  if (taps) mc.warnings.emplace_back("transformer tap ratios ignored");
  if (shifts) mc.warnings.emplace_back("phase shift angles ignored");
  if (skipped) mc.warnings.emplace_back("out-of-service branches skipped");
  return mc;
}

MatpowerCase read_matpower(const std::filesystem::path& path) {
  return parse_matpower(read_text(path));
}

PowerNetwork matpower_network(const MatpowerCase& mc, double default_inertia,
                              const std::map<long, double>& inertia) {
  std::map<long, std::size_t> index;
  std::vector<double> m;
  for (const long id : mc.bus_ids) {
    index.emplace(id, m.size());
    const auto it = inertia.find(id);
    m.push_back(it == inertia.end() ? default_inertia : it->second);
  }
  std::vector<Line> lines;
  for (const auto& br : mc.branches) {
    const auto a = index.find(br.from);
    const auto b = index.find(br.to);
    if (a == index.end() || b == index.end()) {
      throw Error(ErrorCode::SchemaViolation, "branch references a bus missing from mpc.bus");
    }
    lines.push_back({a->second, b->second, br.B});
  }
  return PowerNetwork::build(std::move(m), std::move(lines), mc.bus_ids);
}

}  // namespace coherency::grid
