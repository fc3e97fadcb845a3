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

#include "vulnposture/report.hpp"

#include <algorithm>
#include <iomanip>

#include "vulnposture/error.hpp"

namespace vulnposture {
namespace {

using nlohmann::json;

json IdsToJson(const IdSet& ids) {
  json out = json::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

IdSet IdsFromJson(const json& doc) {
  IdSet out;
  for (const auto& item : doc) out.insert(EntityId(item.get<std::string>()));
  return out;
}

Verdict ParseVerdict(const std::string& s) {
  if (s == "mitigated") return Verdict::kMitigated;
  if (s == "unmitigated") return Verdict::kUnmitigated;
  throw Error(errc::kParseFailure, "unknown verdict '" + s + "'");
}

BasisKind ParseBasis(const std::string& s) {
  if (s == "direct-rule") return BasisKind::kDirectRule;
  if (s == "abstraction") return BasisKind::kAbstraction;
  if (s == "none") return BasisKind::kNone;
  throw Error(errc::kParseFailure, "unknown basis '" + s + "'");
}

std::string JoinIds(const IdSet& ids) {
  if (ids.empty()) return "-";
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id.str();
  }
  return out;
}

bool Selected(const IdSet& only, const EntityId& id) {
  return only.empty() || only.count(id) > 0;
}

}  // namespace

json explanation_to_json(const ExplanationNode& node) {
  json out;
  out["vulnerability"] = node.vulnerability.str();
  out["verdict"] = to_string(node.verdict);
  out["basis"] = to_string(node.basis);
  out["witness"] = node.witness ? json{{"rule", node.witness->rule.str()},
                                       {"type", node.witness->type.str()}}
                                : json(nullptr);
  out["children"] = json::array();
  for (const auto& child : node.children) {
    out["children"].push_back(explanation_to_json(child));
  }
  out["candidates"] = json::array();
  for (const auto& c : node.candidates) {
    out["candidates"].push_back({{"rule", c.rule.str()},
                                 {"type_matched", c.type_matched},
                                 {"missing_controls", IdsToJson(c.missing_controls)}});
  }
  out["truncated"] = node.truncated;
  return out;
}

ExplanationNode explanation_from_json(const json& doc) {
  try {
    ExplanationNode node{EntityId(doc.at("vulnerability").get<std::string>())};
    node.verdict = ParseVerdict(doc.at("verdict").get<std::string>());
    node.basis = ParseBasis(doc.at("basis").get<std::string>());
    if (const auto& w = doc.at("witness"); !w.is_null()) {
      node.witness = MitigationWitness{EntityId(w.at("rule").get<std::string>()),
                                       EntityId(w.at("type").get<std::string>())};
    }
    for (const auto& child : doc.at("children")) {
      node.children.push_back(explanation_from_json(child));
    }
    for (const auto& c : doc.at("candidates")) {
      CandidateRule candidate{EntityId(c.at("rule").get<std::string>())};
      candidate.type_matched = c.at("type_matched").get<bool>();
      candidate.missing_controls = IdsFromJson(c.at("missing_controls"));
      node.candidates.push_back(std::move(candidate));
    }
    node.truncated = doc.at("truncated").get<bool>();
    return node;
  } catch (const json::exception& e) {
    throw Error(errc::kParseFailure, std::string("explanation: ") + e.what());
  }
}

json report_to_json(const PostureReport& report, const IdSet& only) {
  json out;
  out["format"] = kReportFormat;
  out["version"] = kReportVersion;
  out["property_holds"] = report.property_holds;
  out["components"] = json::array();
  out["counterexamples"] = json::array();
  for (const auto& entry : report.per_component) {
    if (!Selected(only, entry.component)) continue;
    json c;
    c["id"] = entry.component.str();
    c["vulnerable"] = entry.vulnerable;
    c["cvulns"] = IdsToJson(entry.cvulns);
    c["unmitigated"] = IdsToJson(entry.unmitigated);
    c["explanations"] = json::array();
    for (const auto& v : entry.cvulns) {
      auto it = report.explanations.find({entry.component, v});
      if (it != report.explanations.end()) {
        c["explanations"].push_back(explanation_to_json(it->second));
      }
    }
    for (const auto& v : entry.unmitigated) {
      out["counterexamples"].push_back(
          {{"component", entry.component.str()}, {"vulnerability", v.str()}});
    }
    out["components"].push_back(std::move(c));
  }
  return out;
}

PostureReport report_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kReportFormat) {
      throw Error(errc::kParseFailure, "not a posture report");
    }
    if (doc.at("version").get<int>() != kReportVersion) {
      throw Error(errc::kParseFailure, "unsupported report version");
    }
    PostureReport report;
    report.property_holds = doc.at("property_holds").get<bool>();
    for (const auto& c : doc.at("components")) {
      ComponentPosture entry{EntityId(c.at("id").get<std::string>())};
      entry.vulnerable = c.at("vulnerable").get<bool>();
      entry.cvulns = IdsFromJson(c.at("cvulns"));
      entry.unmitigated = IdsFromJson(c.at("unmitigated"));
      for (const auto& e : c.at("explanations")) {
        ExplanationNode node = explanation_from_json(e);
        EntityId v = node.vulnerability;
        report.explanations.emplace(ComponentVulnerability{entry.component, v},
                                    std::move(node));
      }
      report.per_component.push_back(std::move(entry));
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(errc::kParseFailure, std::string("report: ") + e.what());
  }
}

json findings_to_json(const ValidationReport& report) {
  json out = json::array();
  for (const auto& f : report.findings) {
    out.push_back({{"severity", to_string(f.severity)},
                   {"code", f.code},
                   {"subject", f.subject},
                   {"message", f.message}});
  }
  return out;
}

std::string dump_canonical(const json& doc) { return doc.dump(2) + "\n"; }

void render_human(std::ostream& os, const PostureReport& report,
                  const IdSet& only) {
  os << "No unmitigated vulnerabilities in any component: "
     << (report.property_holds ? "HOLDS" : "VIOLATED") << "\n\n";

  std::size_t id_width = 9;  // "COMPONENT"
  std::size_t cvulns_width = 6;
  for (const auto& e : report.per_component) {
    if (!Selected(only, e.component)) continue;
    id_width = std::max(id_width, e.component.str().size());
    cvulns_width = std::max(cvulns_width, JoinIds(e.cvulns).size());
  }
  os << std::left << std::setw(static_cast<int>(id_width) + 2) << "COMPONENT"
     << std::setw(12) << "VULNERABLE"
     << std::setw(static_cast<int>(cvulns_width) + 2) << "CVULNS"
     << "UNMITIGATED\n";
  for (const auto& e : report.per_component) {
    if (!Selected(only, e.component)) continue;
    os << std::setw(static_cast<int>(id_width) + 2) << e.component.str()
       << std::setw(12) << (e.vulnerable ? "yes" : "no")
       << std::setw(static_cast<int>(cvulns_width) + 2) << JoinIds(e.cvulns)
       << JoinIds(e.unmitigated) << "\n";
  }
  for (const auto& [key, node] : report.explanations) {
    if (!Selected(only, key.first)) continue;
    os << "\n" << key.first.str() << " / " << key.second.str() << ":\n";
    render_explanation(os, node, 1);
  }
}

void render_explanation(std::ostream& os, const ExplanationNode& node,
                        int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad << node.vulnerability.str() << "  " << to_string(node.verdict);
  switch (node.basis) {
    case BasisKind::kDirectRule:
      os << "  by " << node.witness->rule.str() << " (type "
         << node.witness->type.str() << ")";
      break;
    case BasisKind::kAbstraction:
      os << "  via all parent abstractions";
      break;
    case BasisKind::kNone:
      if (node.candidates.empty() && node.children.empty()) {
        os << "  (no rule addresses it and it has no parent abstraction)";
      }
      break;
  }
  if (node.truncated) os << "  [truncated]";
  os << "\n";
  for (const auto& c : node.candidates) {
    os << pad << "  - candidate " << c.rule.str() << ": ";
    if (!c.type_matched) {
      os << "no rule type matches the component";
      if (!c.missing_controls.empty()) os << "; ";
    }
    if (!c.missing_controls.empty()) {
      os << "missing controls " << JoinIds(c.missing_controls);
    } else if (c.type_matched) {
      os << "satisfied";
    }
    os << "\n";
  }
  for (const auto& child : node.children) {
    render_explanation(os, child, indent + 1);
  }
}

void render_findings(std::ostream& os, const ValidationReport& report) {
  for (const auto& f : report.findings) {
    os << to_string(f.severity) << " [" << f.code << "] " << f.subject << ": "
       << f.message << "\n";
  }
  os << report.error_count() << " error(s), " << report.warning_count()
     << " warning(s)\n";
}

}  // namespace vulnposture
