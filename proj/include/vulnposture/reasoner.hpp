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

#ifndef VULNPOSTURE_REASONER_HPP_
#define VULNPOSTURE_REASONER_HPP_

#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "vulnposture/model.hpp"

namespace vulnposture {

// The rule (and the type it matched on) that directly mitigates a
// vulnerability for a component.
struct MitigationWitness {
  EntityId rule;
  EntityId type;

  friend bool operator==(const MitigationWitness&,
                         const MitigationWitness&) = default;
};

enum class Verdict { kMitigated, kUnmitigated };
enum class BasisKind { kDirectRule, kAbstraction, kNone };

std::string_view to_string(Verdict verdict);
std::string_view to_string(BasisKind basis);

// Why a rule listing the vulnerability did not mitigate it for a component.
struct CandidateRule {
  EntityId rule;
  bool type_matched = false;
  IdSet missing_controls;

  friend bool operator==(const CandidateRule&, const CandidateRule&) = default;
};

// One step of the Mitigated recursion, materialised:
//   kDirectRule   `witness` holds the rule and matched type.
//   kAbstraction  mitigated because every parent is; `children` has one node
//                 per parent, all mitigated.
//   kNone         unmitigated. `children` has one node per parent (possibly
//                 empty), showing which abstraction failed.
// `candidates` lists every rule naming the vulnerability whenever direct
// mitigation failed. Trees are expanded fully; below kMaxExplanationDepth a
// node is emitted with `truncated` set and no children.
struct ExplanationNode {
  EntityId vulnerability;
  Verdict verdict = Verdict::kUnmitigated;
  BasisKind basis = BasisKind::kNone;
  std::optional<MitigationWitness> witness;
  std::vector<ExplanationNode> children;
  std::vector<CandidateRule> candidates;
  bool truncated = false;

  friend bool operator==(const ExplanationNode&,
                         const ExplanationNode&) = default;
};

inline constexpr int kMaxExplanationDepth = 32;

struct VulnerableResult {
  bool vulnerable = false;
  IdSet unmitigated;

  friend bool operator==(const VulnerableResult&,
                         const VulnerableResult&) = default;
};

struct ComponentPosture {
  EntityId component;
  bool vulnerable = false;
  IdSet cvulns;
  IdSet unmitigated;

  friend bool operator==(const ComponentPosture&,
                         const ComponentPosture&) = default;
};

using ComponentVulnerability = std::pair<EntityId, EntityId>;

struct PostureReport {
  bool property_holds = true;
  std::vector<ComponentPosture> per_component;  // ordered by component id
  std::map<ComponentVulnerability, ExplanationNode> explanations;

  // Every (component, vulnerability) pair left unmitigated, in order.
  std::vector<ComponentVulnerability> counterexamples() const;

  friend bool operator==(const PostureReport&, const PostureReport&) = default;
};

// Evaluates the posture calculus over one model snapshot. The constructor
// validates the model and throws `invalid-model` if it has errors; the model
// must outlive the reasoner. Every query builds its own memo table, so a
// Reasoner may be shared across threads.
class Reasoner {
 public:
  explicit Reasoner(const DesignModel& model);

  const DesignModel& model() const { return model_; }

  // ⋃ VULNS(t) over TYPES(component).
  IdSet cvulns(const EntityId& component) const;

  // Direct mitigation: the first rule (by id) with a type shared with the
  // component, listing the vulnerability, whose controls the component all
  // has.
  std::optional<MitigationWitness> mitigated_v(const EntityId& vulnerability,
                                               const EntityId& component) const;

  // Direct mitigation, or every parent abstraction (of which there is at
  // least one) mitigated.
  bool mitigated(const EntityId& vulnerability, const EntityId& component) const;

  VulnerableResult vulnerable(const EntityId& component) const;

  PostureReport check_design() const;

  // Throws `not-applicable` unless vulnerability ∈ cvulns(component).
  ExplanationNode explain(const EntityId& component,
                          const EntityId& vulnerability) const;

 private:
  class Pass;

  const Component& FindComponent(const EntityId& id) const;
  const Vulnerability& FindVulnerability(const EntityId& id) const;

  const DesignModel& model_;
  // Rules listing each vulnerability in RVULNS, ordered by rule id.
  std::map<EntityId, std::vector<const Rule*>> rules_by_vuln_;
};

// One-shot conveniences; each validates the model.
IdSet cvulns(const DesignModel& model, const EntityId& component);
std::optional<MitigationWitness> mitigated_v(const DesignModel& model,
                                             const EntityId& vulnerability,
                                             const EntityId& component);
bool mitigated(const DesignModel& model, const EntityId& vulnerability,
               const EntityId& component);
VulnerableResult vulnerable(const DesignModel& model, const EntityId& component);
PostureReport check_design(const DesignModel& model);
ExplanationNode explain(const DesignModel& model, const EntityId& component,
                        const EntityId& vulnerability);

}  // namespace vulnposture

#endif  // VULNPOSTURE_REASONER_HPP_
