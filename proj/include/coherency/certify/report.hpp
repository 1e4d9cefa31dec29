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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coherency/certify/certificates.hpp"

namespace coherency::certify {

/// Human-readable formula for a named constant, empty when unknown.
std::string formula_of(std::string_view constant);

/// Every constant with its formula and value, the provenance inputs and the
/// verification verdict when one is given.
nlohmann::json certificate_json(const BoundCertificate& cert, const VerifyReport* verdict = nullptr);

/// Plain-text rendering of certificate_json.
std::string certificate_text(const BoundCertificate& cert, const VerifyReport* verdict = nullptr);

/// Columns of the sweep aggregate: scenario, certificate, then fixed
/// constant and verdict columns.
std::vector<std::string> csv_columns();
std::string csv_header();
std::string csv_row(const std::string& scenario, const BoundCertificate& cert, const VerifyReport* verdict);

}  // namespace coherency::certify
