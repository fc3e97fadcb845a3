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

#include "vulnposture/model.hpp"

namespace vulnposture {

std::string_view to_string(VulnerabilityKind kind) {
  return kind == VulnerabilityKind::kMechanism ? "mechanism" : "implementation";
}

std::string_view to_string(TypeOrigin origin) {
  switch (origin) {
    case TypeOrigin::kManual:
      return "manual";
    case TypeOrigin::kNvdImport:
      return "nvd-import";
    case TypeOrigin::kCweImport:
      return "cwe-import";
  }
  return "manual";
}

std::optional<VulnerabilityKind> parse_vulnerability_kind(std::string_view s) {
  if (s == "mechanism") return VulnerabilityKind::kMechanism;
  if (s == "implementation") return VulnerabilityKind::kImplementation;
  return std::nullopt;
}

std::optional<TypeOrigin> parse_type_origin(std::string_view s) {
  if (s == "manual") return TypeOrigin::kManual;
  if (s == "nvd-import") return TypeOrigin::kNvdImport;
  if (s == "cwe-import") return TypeOrigin::kCweImport;
  return std::nullopt;
}

VulnerabilityKind infer_kind(std::string_view id) {
  return scheme_of(id) == IdScheme::kCve ? VulnerabilityKind::kImplementation
                                         : VulnerabilityKind::kMechanism;
}

void put(DesignModel& model, Component c) {
  auto id = c.id;
  model.components.insert_or_assign(std::move(id), std::move(c));
}
void put(DesignModel& model, ComponentType t) {
  auto id = t.id;
  model.component_types.insert_or_assign(std::move(id), std::move(t));
}
void put(DesignModel& model, Vulnerability v) {
  auto id = v.id;
  model.vulnerabilities.insert_or_assign(std::move(id), std::move(v));
}
void put(DesignModel& model, Control s) {
  auto id = s.id;
  model.controls.insert_or_assign(std::move(id), std::move(s));
}
void put(DesignModel& model, Rule r) {
  auto id = r.id;
  model.rules.insert_or_assign(std::move(id), std::move(r));
}

}  // namespace vulnposture
