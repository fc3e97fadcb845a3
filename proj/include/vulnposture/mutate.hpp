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

#ifndef VULNPOSTURE_MUTATE_HPP_
#define VULNPOSTURE_MUTATE_HPP_

#include <string_view>
#include <variant>

#include "vulnposture/model.hpp"

namespace vulnposture {

enum class EntityKind { kComponent, kComponentType, kVulnerability, kControl, kRule };

// Set-valued mappings that can be linked/unlinked. The owner is the entity
// holding the set; the target is the id added to or removed from it.
enum class Relation {
  kComponentType,        // TYPES(component) ∋ type
  kComponentControl,     // CONTROLS(component) ∋ control
  kTypeVulnerability,    // VULNS(type) ∋ vulnerability
  kVulnerabilityParent,  // AVULNS(vulnerability) ∋ parent
  kRuleVulnerability,    // RVULNS(rule) ∋ vulnerability
  kRuleType,             // RTYPES(rule) ∋ type
  kRuleControl,          // RCONTROLS(rule) ∋ control
};

std::string_view to_string(EntityKind kind);
std::string_view to_string(Relation relation);

using AnyEntity =
    std::variant<Component, ComponentType, Vulnerability, Control, Rule>;

// Insert an entity. With `replace` unset an existing id is a `duplicate-id`.
struct Upsert {
  AnyEntity entity;
  bool replace = false;
};

// Remove an entity. Removing something still referenced is rejected with
// `dangling-reference` unless `cascade` is set, in which case every
// reference to it is dropped as well.
struct Delete {
  EntityKind kind;
  EntityId id;
  bool cascade = false;
};

struct Link {
  Relation relation;
  EntityId owner;
  EntityId target;
};

// Unlinking a target that is not present is a no-op.
struct Unlink {
  Relation relation;
  EntityId owner;
  EntityId target;
};

using Change = std::variant<Upsert, Delete, Link, Unlink>;

// Returns the model with `change` applied, or throws vulnposture::Error with
// one of `dangling-reference`, `would-create-cycle`, `duplicate-id`,
// `malformed-id`. A model that validates without errors still does so after
// any accepted change.
DesignModel mutate(const DesignModel& model, const Change& change);

}  // namespace vulnposture

#endif  // VULNPOSTURE_MUTATE_HPP_
