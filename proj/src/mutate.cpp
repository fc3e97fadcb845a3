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

#include "vulnposture/mutate.hpp"

#include <vector>

#include "vulnposture/error.hpp"
#include "vulnposture/validate.hpp"

namespace vulnposture {
namespace {

[[noreturn]] void Dangling(std::string_view what, const EntityId& id) {
  throw Error(errc::kDanglingReference,
              "unknown " + std::string(what) + " '" + id.str() + "'");
}

template <typename Map>
void RequireAll(const Map& targets, const IdSet& refs, std::string_view what) {
  for (const auto& ref : refs) {
    if (!targets.count(ref)) Dangling(what, ref);
  }
}

void RequireWellFormed(const EntityId& id) {
  if (auto problem = id_form_problem(id.str())) {
    throw Error(errc::kMalformedId, "id '" + id.str() + "': " + *problem);
  }
}

template <typename Map, typename Entity>
void Insert(Map& map, Entity entity, bool replace) {
  RequireWellFormed(entity.id);
  if (!replace && map.count(entity.id)) {
    throw Error(errc::kDuplicateId, "id '" + entity.id.str() + "' already exists");
  }
  auto id = entity.id;
  map.insert_or_assign(std::move(id), std::move(entity));
}

void CheckParents(const DesignModel& model, const Vulnerability& v) {
  for (const auto& parent : v.avulns) {
    if (parent == v.id || abstraction_reaches(model, parent, v.id)) {
      throw Error(errc::kWouldCreateCycle,
                  "parent '" + parent.str() + "' of '" + v.id.str() +
                      "' would close an abstraction cycle");
    }
  }
}

struct UpsertVisitor {
  DesignModel& model;
  bool replace;

  void operator()(Component c) const {
    RequireAll(model.component_types, c.types, "component type");
    RequireAll(model.controls, c.controls, "control");
    Insert(model.components, std::move(c), replace);
  }
  void operator()(ComponentType t) const {
    RequireAll(model.vulnerabilities, t.vulns, "vulnerability");
    Insert(model.component_types, std::move(t), replace);
  }
  void operator()(Vulnerability v) const {
    for (const auto& parent : v.avulns) {
      if (parent != v.id && !model.vulnerabilities.count(parent)) {
        Dangling("vulnerability", parent);
      }
    }
    Vulnerability copy = v;
    Insert(model.vulnerabilities, std::move(v), replace);
    CheckParents(model, copy);
  }
  void operator()(Control s) const { Insert(model.controls, std::move(s), replace); }
  void operator()(Rule r) const {
    RequireAll(model.vulnerabilities, r.rvulns, "vulnerability");
    RequireAll(model.component_types, r.rtypes, "component type");
    RequireAll(model.controls, r.rcontrols, "control");
    Insert(model.rules, std::move(r), replace);
  }
};

// Referencing sets of every entity that may point at (kind, id).
std::vector<std::pair<std::string, IdSet*>> Referrers(DesignModel& model,
                                                      EntityKind kind,
                                                      const EntityId& id) {
  std::vector<std::pair<std::string, IdSet*>> out;
  auto add = [&](const EntityId& owner, IdSet& set) {
    if (set.count(id)) out.emplace_back(owner.str(), &set);
  };
  switch (kind) {
    case EntityKind::kComponentType:
      for (auto& [cid, c] : model.components) add(cid, c.types);
      for (auto& [rid, r] : model.rules) add(rid, r.rtypes);
      break;
    case EntityKind::kVulnerability:
      for (auto& [tid, t] : model.component_types) add(tid, t.vulns);
      for (auto& [vid, v] : model.vulnerabilities) add(vid, v.avulns);
      for (auto& [rid, r] : model.rules) add(rid, r.rvulns);
      break;
    case EntityKind::kControl:
      for (auto& [cid, c] : model.components) add(cid, c.controls);
      for (auto& [rid, r] : model.rules) add(rid, r.rcontrols);
      break;
    case EntityKind::kComponent:
    case EntityKind::kRule:
      break;
  }
  return out;
}

template <typename Map>
bool Erase(Map& map, const EntityId& id) {
  return map.erase(id) > 0;
}

void ApplyDelete(DesignModel& model, const Delete& d) {
  bool found = false;
  switch (d.kind) {
    case EntityKind::kComponent:
      found = model.components.count(d.id) > 0;
      break;
    case EntityKind::kComponentType:
      found = model.component_types.count(d.id) > 0;
      break;
    case EntityKind::kVulnerability:
      found = model.vulnerabilities.count(d.id) > 0;
      break;
    case EntityKind::kControl:
      found = model.controls.count(d.id) > 0;
      break;
    case EntityKind::kRule:
      found = model.rules.count(d.id) > 0;
      break;
  }
  if (!found) Dangling(to_string(d.kind), d.id);

  auto referrers = Referrers(model, d.kind, d.id);
  if (!referrers.empty() && !d.cascade) {
    std::string owners;
    for (const auto& [owner, set] : referrers) {
      if (!owners.empty()) owners += ", ";
      owners += owner;
    }
    throw Error(errc::kDanglingReference,
                std::string(to_string(d.kind)) + " '" + d.id.str() +
                    "' is still referenced by: " + owners +
                    " (use cascade to remove references)");
  }
  for (auto& [owner, set] : referrers) set->erase(d.id);

  switch (d.kind) {
    case EntityKind::kComponent:
      Erase(model.components, d.id);
      break;
    case EntityKind::kComponentType:
      Erase(model.component_types, d.id);
      break;
    case EntityKind::kVulnerability:
      Erase(model.vulnerabilities, d.id);
      break;
    case EntityKind::kControl:
      Erase(model.controls, d.id);
      break;
    case EntityKind::kRule:
      Erase(model.rules, d.id);
      break;
  }
}

template <typename Map>
auto& Owner(Map& map, const EntityId& id, std::string_view what) {
  auto it = map.find(id);
  if (it == map.end()) Dangling(what, id);
  return it->second;
}

// Resolves the set named by `relation` on its owner and checks that `target`
// exists when `require_target` is set.
IdSet& RelationSet(DesignModel& m, Relation relation, const EntityId& owner,
                   const EntityId& target, bool require_target) {
  auto require = [&](const auto& map, std::string_view what) {
    if (require_target && !map.count(target)) Dangling(what, target);
  };
  switch (relation) {
    case Relation::kComponentType:
      require(m.component_types, "component type");
      return Owner(m.components, owner, "component").types;
    case Relation::kComponentControl:
      require(m.controls, "control");
      return Owner(m.components, owner, "component").controls;
    case Relation::kTypeVulnerability:
      require(m.vulnerabilities, "vulnerability");
      return Owner(m.component_types, owner, "component type").vulns;
    case Relation::kVulnerabilityParent:
      require(m.vulnerabilities, "vulnerability");
      return Owner(m.vulnerabilities, owner, "vulnerability").avulns;
    case Relation::kRuleVulnerability:
      require(m.vulnerabilities, "vulnerability");
      return Owner(m.rules, owner, "rule").rvulns;
    case Relation::kRuleType:
      require(m.component_types, "component type");
      return Owner(m.rules, owner, "rule").rtypes;
    case Relation::kRuleControl:
      require(m.controls, "control");
      return Owner(m.rules, owner, "rule").rcontrols;
  }
  throw Error(errc::kUsage, "unknown relation");
}

}  // namespace

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::kComponent:
      return "component";
    case EntityKind::kComponentType:
      return "component type";
    case EntityKind::kVulnerability:
      return "vulnerability";
    case EntityKind::kControl:
      return "control";
    case EntityKind::kRule:
      return "rule";
  }
  return "entity";
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::kComponentType:
      return "type";
    case Relation::kComponentControl:
      return "control";
    case Relation::kTypeVulnerability:
      return "vuln";
    case Relation::kVulnerabilityParent:
      return "parent";
    case Relation::kRuleVulnerability:
      return "rule-vuln";
    case Relation::kRuleType:
      return "rule-type";
    case Relation::kRuleControl:
      return "rule-control";
  }
  return "relation";
}

DesignModel mutate(const DesignModel& model, const Change& change) {
  DesignModel next = model;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Upsert>) {
          std::visit(UpsertVisitor{next, c.replace}, c.entity);
        } else if constexpr (std::is_same_v<T, Delete>) {
          ApplyDelete(next, c);
        } else if constexpr (std::is_same_v<T, Link>) {
          IdSet& set = RelationSet(next, c.relation, c.owner, c.target, true);
          if (c.relation == Relation::kVulnerabilityParent &&
              (c.owner == c.target ||
               abstraction_reaches(next, c.target, c.owner))) {
            throw Error(errc::kWouldCreateCycle,
                        "parent '" + c.target.str() + "' of '" + c.owner.str() +
                            "' would close an abstraction cycle");
          }
          set.insert(c.target);
        } else {
          RelationSet(next, c.relation, c.owner, c.target, false).erase(c.target);
        }
      },
      change);
  return next;
}

}  // namespace vulnposture
