// Copyright 2026 The vulnposture Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VULNPOSTURE_REPORT_HPP_
#define VULNPOSTURE_REPORT_HPP_

#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>
#include "vulnposture/reasoner.hpp"
#include "vulnposture/validate.hpp"

namespace vulnposture {

inline constexpr std::string_view kReportFormat = "vulnposture-report";
inline constexpr int kReportVersion = 1;

// Machine-readable report. Keys are sorted and id arrays ordered, so equal
// reports serialise to identical bytes. When `only` is non-empty the
// component list, explanations and counterexamples are restricted to those
// components; `property_holds` always reflects the whole design.
nlohmann::json report_to_json(const PostureReport& report,
                              const IdSet& only = {});

// Inverse of report_to_json (unfiltered). Throws `parse-failure`.
PostureReport report_from_json(const nlohmann::json& doc);

nlohmann::json explanation_to_json(const ExplanationNode& node);
ExplanationNode explanation_from_json(const nlohmann::json& doc);

nlohmann::json findings_to_json(const ValidationReport& report);

// Canonical text form: two-space indentation, trailing newline.
std::string dump_canonical(const nlohmann::json& doc);

void render_human(std::ostream& os, const PostureReport& report,
                  const IdSet& only = {});

// Indented outline of an explanation tree, one node per line.
void render_explanation(std::ostream& os, const ExplanationNode& node,
                        int indent = 0);

void render_findings(std::ostream& os, const ValidationReport& report);

}  // namespace vulnposture

#endif  // VULNPOSTURE_REPORT_HPP_
