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

#include "vulnposture/validate.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <unordered_map>

namespace vulnposture {
namespace {

template <typename Map>
void CheckRefs(const Map& targets, const IdSet& refs, std::string_view owner,
               std::string_view relation, std::string_view target_kind,
               std::vector<Finding>& out) {
  for (const auto& ref : refs) {
    if (targets.count(ref)) continue;
    out.push_back({Severity::kError, finding_code::kDanglingReference,
                   std::string(owner),
                   std::string(relation) + " references unknown " +
                       std::string(target_kind) + " '" + ref.str() + "'"});
  }
}

template <typename Map>
void CheckIds(const Map& entities, std::string_view kind,
              std::vector<Finding>& out) {
  for (const auto& [id, entity] : entities) {
    if (auto problem = id_form_problem(id.str())) {
      out.push_back({Severity::kError, finding_code::kMalformedId, id.str(),
                     std::string(kind) + " id '" + id.str() + "': " + *problem});
    }
  }
}

// Iterative Tarjan over the avulns graph.
struct SccFinder {
  const DesignModel& model;
  std::unordered_map<const Vulnerability*, int> index, low;
  std::vector<const Vulnerability*> stack;
  std::unordered_map<const Vulnerability*, bool> on_stack;
  int counter = 0;
  std::vector<std::vector<EntityId>> cycles;

  const Vulnerability* Find(const EntityId& id) const {
    auto it = model.vulnerabilities.find(id);
    return it == model.vulnerabilities.end() ? nullptr : &it->second;
  }

  void Run(const Vulnerability* root) {
    struct Frame {
      const Vulnerability* v;
      IdSet::const_iterator next;
    };
    std::vector<Frame> frames;
    auto enter = [&](const Vulnerability* v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      frames.push_back({v, v->avulns.begin()});
    };
    enter(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next != f.v->avulns.end()) {
        const Vulnerability* w = Find(*f.next++);
        if (!w) continue;
        if (!index.count(w)) {
          enter(w);
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const Vulnerability* v = f.v;
      frames.pop_back();
      if (!frames.empty()) {
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
      if (low[v] != index[v]) continue;
      std::vector<EntityId> scc;
      const Vulnerability* w = nullptr;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        scc.push_back(w->id);
      } while (w != v);
      if (scc.size() > 1 || v->avulns.count(v->id)) {
        std::sort(scc.begin(), scc.end());
        cycles.push_back(std::move(scc));
      }
    }
  }
};

std::string JoinIds(const std::vector<EntityId>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id.str();
  }
  return out;
}

}  // namespace

std::string_view to_string(Severity severity) {
  return severity == Severity::kError ? "error" : "warning";
}

bool ValidationReport::has_errors() const { return error_count() > 0; }

std::size_t ValidationReport::error_count() const {
  return std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::kError;
  });
}

std::size_t ValidationReport::warning_count() const {
  return findings.size() - error_count();
}

std::vector<std::vector<EntityId>> abstraction_cycles(const DesignModel& model) {
  SccFinder finder{model};
  for (const auto& [id, v] : model.vulnerabilities) {
    if (!finder.index.count(&v)) finder.Run(&v);
  }
  auto cycles = std::move(finder.cycles);
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

bool abstraction_reaches(const DesignModel& model, const EntityId& from,
                         const EntityId& to) {
  std::vector<EntityId> pending{from};
  IdSet seen{from};
  while (!pending.empty()) {
    EntityId current = pending.back();
    pending.pop_back();
    if (current == to) return true;
    auto it = model.vulnerabilities.find(current);
    if (it == model.vulnerabilities.end()) continue;
    for (const auto& parent : it->second.avulns) {
      if (seen.insert(parent).second) pending.push_back(parent);
    }
  }
  return false;
}

ValidationReport validate_model(const DesignModel& model) {
  std::vector<Finding> out;

  CheckIds(model.components, "component", out);
  CheckIds(model.component_types, "component type", out);
  CheckIds(model.vulnerabilities, "vulnerability", out);
  CheckIds(model.controls, "control", out);
  CheckIds(model.rules, "rule", out);

  for (const auto& [id, c] : model.components) {
    CheckRefs(model.component_types, c.types, id.str(), "types",
              "component type", out);
    CheckRefs(model.controls, c.controls, id.str(), "controls", "control", out);
  }
  for (const auto& [id, t] : model.component_types) {
    CheckRefs(model.vulnerabilities, t.vulns, id.str(), "vulns",
              "vulnerability", out);
  }
  for (const auto& [id, v] : model.vulnerabilities) {
    CheckRefs(model.vulnerabilities, v.avulns, id.str(), "avulns",
              "vulnerability", out);
  }
  for (const auto& [id, r] : model.rules) {
    CheckRefs(model.vulnerabilities, r.rvulns, id.str(), "rvulns",
              "vulnerability", out);
    CheckRefs(model.component_types, r.rtypes, id.str(), "rtypes",
              "component type", out);
    CheckRefs(model.controls, r.rcontrols, id.str(), "rcontrols", "control",
              out);
    if (r.rtypes.empty() || r.rvulns.empty()) {
      out.push_back({Severity::kWarning, finding_code::kInertRule, id.str(),
                     "rule '" + id.str() + "' can never apply: " +
                         (r.rtypes.empty() ? "rtypes" : "rvulns") +
                         " is empty"});
    }
    if (r.rcontrols.empty()) {
      out.push_back({Severity::kWarning, finding_code::kRuleWithoutControls,
                     id.str(),
                     "rule '" + id.str() +
                         "' requires no controls; matching vulnerabilities "
                         "count as mitigated unconditionally"});
    }
  }

  for (const auto& cycle : abstraction_cycles(model)) {
    out.push_back({Severity::kError, finding_code::kAbstractionCycle,
                   cycle.front().str(),
                   "abstraction cycle among: " + JoinIds(cycle)});
  }

  std::sort(out.begin(), out.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.severity, a.code, a.subject, a.message) <
           std::tie(b.severity, b.code, b.subject, b.message);
  });
  return ValidationReport{std::move(out)};
}

}  // namespace vulnposture
