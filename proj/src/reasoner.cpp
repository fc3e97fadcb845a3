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

#include "vulnposture/reasoner.hpp"

#include <algorithm>
#include <iterator>
#include <unordered_map>

#include "vulnposture/error.hpp"
#include "vulnposture/validate.hpp"

namespace vulnposture {

// Evaluation state for a single component: memoised Mitigated verdicts keyed
// by vulnerability id. Shared CWE ancestors are evaluated once.
class Reasoner::Pass {
 public:
  Pass(const Reasoner& reasoner, const Component& component)
      : reasoner_(reasoner), component_(component) {}

  std::optional<MitigationWitness> Direct(const EntityId& v) const {
    auto it = reasoner_.rules_by_vuln_.find(v);
    if (it == reasoner_.rules_by_vuln_.end()) return std::nullopt;
    for (const Rule* rule : it->second) {
      if (!Covers(*rule)) continue;
      if (auto type = MatchedType(*rule)) return MitigationWitness{rule->id, *type};
    }
    return std::nullopt;
  }

  bool Mitigated(const Vulnerability& v) {
    if (auto it = memo_.find(&v); it != memo_.end()) return it->second;
    bool result = Direct(v.id).has_value();
    if (!result && !v.avulns.empty()) {
      result = std::all_of(v.avulns.begin(), v.avulns.end(),
                           [&](const EntityId& parent) {
                             return Mitigated(reasoner_.FindVulnerability(parent));
                           });
    }
    memo_.emplace(&v, result);
    return result;
  }

  ExplanationNode Explain(const Vulnerability& v, int depth) {
    ExplanationNode node{v.id};
    node.verdict = Mitigated(v) ? Verdict::kMitigated : Verdict::kUnmitigated;
    if (auto witness = Direct(v.id)) {
      node.basis = BasisKind::kDirectRule;
      node.witness = std::move(witness);
      return node;
    }
    node.basis = node.verdict == Verdict::kMitigated ? BasisKind::kAbstraction
                                                      : BasisKind::kNone;
    node.candidates = Candidates(v.id);
    if (v.avulns.empty()) return node;
    if (depth >= kMaxExplanationDepth) {
      node.truncated = true;
      return node;
    }
    for (const auto& parent : v.avulns) {
      node.children.push_back(
          Explain(reasoner_.FindVulnerability(parent), depth + 1));
    }
    return node;
  }

 private:
  // RCONTROLS(r) ⊆ CONTROLS(c)
  bool Covers(const Rule& rule) const {
    return std::includes(component_.controls.begin(), component_.controls.end(),
                         rule.rcontrols.begin(), rule.rcontrols.end());
  }

  // First t ∈ RTYPES(r) ∩ TYPES(c).
  std::optional<EntityId> MatchedType(const Rule& rule) const {
    for (const auto& t : rule.rtypes) {
      if (component_.types.count(t)) return t;
    }
    return std::nullopt;
  }

  std::vector<CandidateRule> Candidates(const EntityId& v) const {
    std::vector<CandidateRule> out;
    auto it = reasoner_.rules_by_vuln_.find(v);
    if (it == reasoner_.rules_by_vuln_.end()) return out;
    for (const Rule* rule : it->second) {
      CandidateRule candidate{rule->id};
      candidate.type_matched = MatchedType(*rule).has_value();
      std::set_difference(
          rule->rcontrols.begin(), rule->rcontrols.end(),
          component_.controls.begin(), component_.controls.end(),
          std::inserter(candidate.missing_controls,
                        candidate.missing_controls.end()));
      out.push_back(std::move(candidate));
    }
    return out;
  }

  const Reasoner& reasoner_;
  const Component& component_;
  std::unordered_map<const Vulnerability*, bool> memo_;
};

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::kMitigated ? "mitigated" : "unmitigated";
}

std::string_view to_string(BasisKind basis) {
  switch (basis) {
    case BasisKind::kDirectRule:
      return "direct-rule";
    case BasisKind::kAbstraction:
      return "abstraction";
    case BasisKind::kNone:
      return "none";
  }
  return "none";
}

std::vector<ComponentVulnerability> PostureReport::counterexamples() const {
  std::vector<ComponentVulnerability> out;
  for (const auto& entry : per_component) {
    for (const auto& v : entry.unmitigated) out.emplace_back(entry.component, v);
  }
  return out;
}

Reasoner::Reasoner(const DesignModel& model) : model_(model) {
  ValidationReport report = validate_model(model);
  if (report.has_errors()) {
    const Finding& first = report.findings.front();
    throw Error(errc::kInvalidModel,
                "model has " + std::to_string(report.error_count()) +
                    " validation error(s); first: [" + first.code + "] " +
                    first.message);
  }
  for (const auto& [id, rule] : model.rules) {
    for (const auto& v : rule.rvulns) rules_by_vuln_[v].push_back(&rule);
  }
}

const Component& Reasoner::FindComponent(const EntityId& id) const {
  auto it = model_.components.find(id);
  if (it == model_.components.end()) {
    throw Error(errc::kUnknownComponent, "unknown component '" + id.str() + "'");
  }
  return it->second;
}

const Vulnerability& Reasoner::FindVulnerability(const EntityId& id) const {
  auto it = model_.vulnerabilities.find(id);
  if (it == model_.vulnerabilities.end()) {
    throw Error(errc::kUnknownVulnerability,
                "unknown vulnerability '" + id.str() + "'");
  }
  return it->second;
}

IdSet Reasoner::cvulns(const EntityId& component) const {
  const Component& c = FindComponent(component);
  IdSet out;
  for (const auto& t : c.types) {
    const auto& vulns = model_.component_types.at(t).vulns;
    out.insert(vulns.begin(), vulns.end());
  }
  return out;
}

std::optional<MitigationWitness> Reasoner::mitigated_v(
    const EntityId& vulnerability, const EntityId& component) const {
  const Component& c = FindComponent(component);
  FindVulnerability(vulnerability);
  return Pass(*this, c).Direct(vulnerability);
}

bool Reasoner::mitigated(const EntityId& vulnerability,
                         const EntityId& component) const {
  const Component& c = FindComponent(component);
  const Vulnerability& v = FindVulnerability(vulnerability);
  return Pass(*this, c).Mitigated(v);
}

VulnerableResult Reasoner::vulnerable(const EntityId& component) const {
  const Component& c = FindComponent(component);
  Pass pass(*this, c);
  VulnerableResult result;
  for (const auto& v : cvulns(component)) {
    if (!pass.Mitigated(FindVulnerability(v))) result.unmitigated.insert(v);
  }
  result.vulnerable = !result.unmitigated.empty();
  return result;
}

PostureReport Reasoner::check_design() const {
  PostureReport report;
  for (const auto& [id, component] : model_.components) {
    Pass pass(*this, component);
    ComponentPosture entry{id};
    entry.cvulns = cvulns(id);
    for (const auto& v : entry.cvulns) {
      ExplanationNode node = pass.Explain(FindVulnerability(v), 0);
      if (node.verdict == Verdict::kUnmitigated) entry.unmitigated.insert(v);
      report.explanations.emplace(ComponentVulnerability{id, v}, std::move(node));
    }
    entry.vulnerable = !entry.unmitigated.empty();
    report.property_holds = report.property_holds && !entry.vulnerable;
    report.per_component.push_back(std::move(entry));
  }
  return report;
}

ExplanationNode Reasoner::explain(const EntityId& component,
                                  const EntityId& vulnerability) const {
  const Component& c = FindComponent(component);
  const Vulnerability& v = FindVulnerability(vulnerability);
  if (!cvulns(component).count(vulnerability)) {
    throw Error(errc::kNotApplicable, "vulnerability '" + vulnerability.str() +
                                          "' does not apply to component '" +
                                          component.str() + "'");
  }
  return Pass(*this, c).Explain(v, 0);
}

IdSet cvulns(const DesignModel& model, const EntityId& component) {
  return Reasoner(model).cvulns(component);
}

std::optional<MitigationWitness> mitigated_v(const DesignModel& model,
                                             const EntityId& vulnerability,
                                             const EntityId& component) {
  return Reasoner(model).mitigated_v(vulnerability, component);
}

bool mitigated(const DesignModel& model, const EntityId& vulnerability,
               const EntityId& component) {
  return Reasoner(model).mitigated(vulnerability, component);
}

VulnerableResult vulnerable(const DesignModel& model, const EntityId& component) {
  return Reasoner(model).vulnerable(component);
}

PostureReport check_design(const DesignModel& model) {
  return Reasoner(model).check_design();
}

ExplanationNode explain(const DesignModel& model, const EntityId& component,
                        const EntityId& vulnerability) {
  return Reasoner(model).explain(component, vulnerability);
}

}  // namespace vulnposture
