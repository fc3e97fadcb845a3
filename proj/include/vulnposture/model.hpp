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

#ifndef VULNPOSTURE_MODEL_HPP_
#define VULNPOSTURE_MODEL_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "vulnposture/ids.hpp"

namespace vulnposture {

// Reasoning never branches on kind; it is kept for reporting and import.
enum class VulnerabilityKind { kMechanism, kImplementation };

enum class TypeOrigin { kManual, kNvdImport, kCweImport };

std::string_view to_string(VulnerabilityKind kind);
std::string_view to_string(TypeOrigin origin);
std::optional<VulnerabilityKind> parse_vulnerability_kind(std::string_view s);
std::optional<TypeOrigin> parse_type_origin(std::string_view s);

// Mechanism for CWE ids, implementation for CVE ids, mechanism otherwise.
VulnerabilityKind infer_kind(std::string_view id);

// Pass-through catalogue data. Never consulted by the reasoner.
struct VulnerabilityMetadata {
  std::optional<std::string> description;
  std::optional<std::string> severity;
  std::optional<std::string> source_url;
  std::optional<std::string> abstraction_level;

  friend bool operator==(const VulnerabilityMetadata&,
                         const VulnerabilityMetadata&) = default;
};

struct Component {
  EntityId id;
  std::string name;
  IdSet types;     // TYPES(c)
  IdSet controls;  // CONTROLS(c)

  friend bool operator==(const Component&, const Component&) = default;
};

struct ComponentType {
  EntityId id;  // free-form or a CPE 2.3 string
  std::string name;
  IdSet vulns;  // VULNS(t)
  TypeOrigin origin = TypeOrigin::kManual;

  friend bool operator==(const ComponentType&, const ComponentType&) = default;
};

struct Vulnerability {
  EntityId id;
  VulnerabilityKind kind = VulnerabilityKind::kMechanism;
  std::string title;
  IdSet avulns;  // AVULNS(v): parents at higher abstraction
  // Stand-in for a CWE referenced by an imported CVE before the catalogue
  // itself was imported.
  bool placeholder = false;
  std::optional<VulnerabilityMetadata> metadata;

  friend bool operator==(const Vulnerability&, const Vulnerability&) = default;
};

struct Control {
  EntityId id;
  std::string name;
  std::optional<std::string> description;

  friend bool operator==(const Control&, const Control&) = default;
};

struct Rule {
  EntityId id;
  std::string name;
  IdSet rvulns;     // RVULNS(r)
  IdSet rtypes;     // RTYPES(r)
  IdSet rcontrols;  // RCONTROLS(r)

  friend bool operator==(const Rule&, const Rule&) = default;
};

template <typename T>
using EntityMap = std::map<EntityId, T>;

// Root container. Treated as an immutable value: operations that change a
// model take it by const reference and return a new one. Map ordering gives
// the lexicographic-by-id iteration order every report relies on.
struct DesignModel {
  static constexpr int kSchemaVersion = 2;

  int schema_version = kSchemaVersion;
  EntityMap<Component> components;
  EntityMap<ComponentType> component_types;
  EntityMap<Vulnerability> vulnerabilities;
  EntityMap<Control> controls;
  EntityMap<Rule> rules;

  friend bool operator==(const DesignModel&, const DesignModel&) = default;
};

// Convenience insertion keyed by the entity's own id. Replaces silently.
void put(DesignModel& model, Component c);
void put(DesignModel& model, ComponentType t);
void put(DesignModel& model, Vulnerability v);
void put(DesignModel& model, Control s);
void put(DesignModel& model, Rule r);

}  // namespace vulnposture

#endif  // VULNPOSTURE_MODEL_HPP_
