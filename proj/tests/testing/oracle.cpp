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

#include "testing/oracle.hpp"

namespace vulnposture::testing {
namespace {

bool Has(const IdSet& s, const EntityId& id) { return s.find(id) != s.end(); }

bool Subset(const IdSet& small, const IdSet& big) {
  for (const auto& x : small) {
    if (!Has(big, x)) return false;
  }
  return true;
}

std::optional<EntityId> SharedType(const Rule& r, const Component& c) {
  for (const auto& t : r.rtypes) {
    if (Has(c.types, t)) return t;
  }
  return std::nullopt;
}

}  // namespace

IdSet oracle_cvulns(const DesignModel& m, const EntityId& c) {
  IdSet out;
  for (const auto& t : m.components.at(c).types) {
    for (const auto& v : m.component_types.at(t).vulns) out.insert(v);
  }
  return out;
}

std::optional<MitigationWitness> oracle_witness(const DesignModel& m, const EntityId& v,
                                                const EntityId& c) {
  const Component& comp = m.components.at(c);
  for (const auto& [id, r] : m.rules) {
    if (!Has(r.rvulns, v)) continue;
    if (!Subset(r.rcontrols, comp.controls)) continue;
    if (auto t = SharedType(r, comp)) return MitigationWitness{id, *t};
  }
  return std::nullopt;
}

bool oracle_mitigated_v(const DesignModel& m, const EntityId& v, const EntityId& c) {
  return oracle_witness(m, v, c).has_value();
}

bool oracle_mitigated(const DesignModel& m, const EntityId& v, const EntityId& c) {
  if (oracle_mitigated_v(m, v, c)) return true;
  const IdSet& parents = m.vulnerabilities.at(v).avulns;
  if (parents.empty()) return false;
  for (const auto& p : parents) {
    if (!oracle_mitigated(m, p, c)) return false;
  }
  return true;
}

bool oracle_vulnerable(const DesignModel& m, const EntityId& c) {
  for (const auto& v : oracle_cvulns(m, c)) {
    if (!oracle_mitigated(m, v, c)) return true;
  }
  return false;
}

bool oracle_property(const DesignModel& m) {
  for (const auto& [c, _] : m.components) {
    if (oracle_vulnerable(m, c)) return false;
  }
  return true;
}

std::string check_explanation(const DesignModel& m, const EntityId& c,
                              const ExplanationNode& node, int depth) {
  const EntityId& v = node.vulnerability;
  std::string where = v.str() + " at depth " + std::to_string(depth) + ": ";
  if (!m.vulnerabilities.count(v)) return where + "unknown vulnerability";
  const Vulnerability& vuln = m.vulnerabilities.at(v);
  const Component& comp = m.components.at(c);

  bool expect = oracle_mitigated(m, v, c);
  if ((node.verdict == Verdict::kMitigated) != expect) return where + "wrong verdict";

  auto witness = oracle_witness(m, v, c);
  if (witness) {
    if (node.basis != BasisKind::kDirectRule) return where + "expected direct-rule basis";
    if (node.witness != witness) return where + "wrong witness";
    if (!node.children.empty()) return where + "direct-rule node has children";
    return "";
  }
  if (node.witness) return where + "witness without direct mitigation";
  if (node.basis == BasisKind::kDirectRule) return where + "direct-rule basis without witness";
  if (node.basis == BasisKind::kAbstraction && (!expect || vuln.avulns.empty())) {
    return where + "abstraction basis is not justified";
  }
  if (node.basis == BasisKind::kNone && expect) return where + "none basis on mitigated node";

  // Every rule naming v, with the reason it failed.
  std::vector<CandidateRule> want;
  for (const auto& [id, r] : m.rules) {
    if (!Has(r.rvulns, v)) continue;
    CandidateRule cand{id};
    cand.type_matched = SharedType(r, comp).has_value();
    for (const auto& s : r.rcontrols) {
      if (!Has(comp.controls, s)) cand.missing_controls.insert(s);
    }
    want.push_back(cand);
  }
  if (node.candidates != want) return where + "wrong candidate list";

  if (node.truncated) {
    if (depth < kMaxExplanationDepth) return where + "truncated too early";
    if (!node.children.empty()) return where + "truncated node has children";
    return "";
  }
  if (node.children.size() != vuln.avulns.size()) return where + "child count differs from avulns";
  auto parent = vuln.avulns.begin();
  for (const auto& child : node.children) {
    if (child.vulnerability != *parent++) return where + "children out of avulns order";
    if (node.verdict == Verdict::kMitigated && child.verdict != Verdict::kMitigated) {
      return where + "mitigated node has unmitigated child";
    }
    if (auto defect = check_explanation(m, c, child, depth + 1); !defect.empty()) {
      return defect;
    }
  }
  return "";
}

}  // namespace vulnposture::testing
