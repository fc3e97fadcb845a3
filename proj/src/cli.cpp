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

#include "vulnposture/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "vulnposture/cwe_catalog.hpp"
#include "vulnposture/error.hpp"
#include "vulnposture/http.hpp"
#include "vulnposture/mutate.hpp"
#include "vulnposture/nvd_client.hpp"
#include "vulnposture/persistence.hpp"
#include "vulnposture/reasoner.hpp"
#include "vulnposture/report.hpp"

namespace vulnposture {
namespace {

namespace fs = std::filesystem;

struct Options {
  bool force = false;
  std::string model;
  std::string format = "human";

  // eval
  std::vector<std::string> components;

  // explain
  std::string component;
  std::string vulnerability;

  // import-cwe
  std::string source;
  std::string view = std::string(kResearchConceptsView);
  bool include_deprecated = false;

  // fetch-cves
  std::string cpe;
  std::string cwe;
  std::string type_id;
  std::string offline;
  std::string record;
  std::string cache_dir;
  std::string nvd_origin = std::string(kNvdOrigin);
  bool no_cache = false;
  bool create_type = false;
  int results_per_page = kNvdMaxResultsPerPage;
  int parallel = 1;

  // edit
  std::string id;
  std::string name;
  std::string title;
  std::string kind;
  std::string description;
  std::vector<std::string> types;
  std::vector<std::string> controls;
  std::vector<std::string> vulns;
  std::vector<std::string> parents;
  std::string relation;
  std::string target;
  std::string owner;
  bool cascade = false;
};

IdSet ToIds(const std::vector<std::string>& values) {
  IdSet out;
  for (const auto& v : values) out.insert(EntityId(v));
  return out;
}

const std::map<std::string, Relation>& Relations() {
  static const std::map<std::string, Relation> relations = {
      {"type", Relation::kComponentType},
      {"control", Relation::kComponentControl},
      {"vuln", Relation::kTypeVulnerability},
      {"parent", Relation::kVulnerabilityParent},
      {"rule-vuln", Relation::kRuleVulnerability},
      {"rule-type", Relation::kRuleType},
      {"rule-control", Relation::kRuleControl},
  };
  return relations;
}

const std::map<std::string, EntityKind>& Kinds() {
  static const std::map<std::string, EntityKind> kinds = {
      {"component", EntityKind::kComponent},
      {"type", EntityKind::kComponentType},
      {"vuln", EntityKind::kVulnerability},
      {"control", EntityKind::kControl},
      {"rule", EntityKind::kRule},
  };
  return kinds;
}

template <typename Map>
std::vector<std::string> Keys(const Map& map) {
  std::vector<std::string> out;
  for (const auto& [key, value] : map) out.push_back(key);
  return out;
}

fs::path DefaultCacheDir() {
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return fs::path(xdg) / "vulnposture";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "vulnposture";
  }
  return fs::temp_directory_path() / "vulnposture-cache";
}

DesignModel Load(const Options& o) {
  return load_model(o.model, LoadOptions{o.force});
}

int CmdInit(const Options& o, std::ostream& out) {
  if (fs::exists(o.model)) {
    throw Error(errc::kExists, o.model + " already exists; refusing to overwrite");
  }
  save_model(DesignModel{}, o.model);
  out << "created " << o.model << "\n";
  return kExitOk;
}

int CmdValidate(const Options& o, std::ostream& out) {
  LoadedModel loaded = read_model(o.model);
  if (o.format == "machine") {
    out << dump_canonical(findings_to_json(loaded.findings));
  } else {
    render_findings(out, loaded.findings);
  }
  return loaded.findings.has_errors() ? kExitError : kExitOk;
}

int CmdEval(const Options& o, std::ostream& out) {
  DesignModel model = Load(o);
  Reasoner reasoner(model);
  IdSet only = ToIds(o.components);
  for (const auto& c : only) {
    if (!model.components.count(c)) {
      throw Error(errc::kUnknownComponent, "unknown component '" + c.str() + "'");
    }
  }
  PostureReport report = reasoner.check_design();
  if (o.format == "machine") {
    out << dump_canonical(report_to_json(report, only));
  } else {
    render_human(out, report, only);
  }
  return report.property_holds ? kExitOk : kExitViolated;
}

int CmdExplain(const Options& o, std::ostream& out) {
  DesignModel model = Load(o);
  ExplanationNode node =
      Reasoner(model).explain(EntityId(o.component), EntityId(o.vulnerability));
  if (o.format == "machine") {
    out << dump_canonical(explanation_to_json(node));
  } else {
    out << o.component << " / " << o.vulnerability << ":\n";
    render_explanation(out, node, 1);
  }
  return kExitOk;
}

int CmdImportCwe(const Options& o, std::ostream& out) {
  DesignModel model = Load(o);
  CweParseOptions parse{o.view, o.include_deprecated};
  CweCatalog catalog;
  if (o.source.rfind("http://", 0) == 0 || o.source.rfind("https://", 0) == 0) {
    catalog = parse_cwe_catalog(http_download(o.source), parse);
  } else {
    std::ifstream in(o.source, std::ios::binary);
    if (!in) throw Error(errc::kIoFailure, "cannot read " + o.source);
    catalog = parse_cwe_catalog(in, parse);
  }
  CweImportSummary summary;
  DesignModel next = import_cwe(model, catalog.entries, &summary);
  save_model(next, o.model);
  out << "added " << summary.added << ", updated " << summary.updated << ", edges "
      << summary.edges << ", dropped edges " << summary.dropped_edges
      << ", skipped deprecated " << catalog.deprecated_skipped << "\n";
  return kExitOk;
}

int CmdFetchCves(const Options& o, std::ostream& out, std::ostream& err) {
  DesignModel model = Load(o);
  QuerySpec spec{o.cpe, o.cwe.empty() ? std::nullopt : std::optional<std::string>(o.cwe),
                 o.results_per_page};
  check_query(spec);
  EntityId type_id(o.type_id.empty() ? o.cpe : o.type_id);
  if (!model.component_types.count(type_id)) {
    if (!o.create_type) {
      throw Error(errc::kUnknownComponentType,
                  "unknown component type '" + type_id.str() +
                      "' (add it first or pass --create-type)");
    }
    model = mutate(model, Upsert{ComponentType{type_id, o.cpe, {}, TypeOrigin::kNvdImport}});
  }

  std::vector<CveRecord> records;
  if (!o.offline.empty()) {
    FixtureTransport fixtures(o.offline);
    records = fetch_cves(spec, fixtures);
  } else {
    SteadyClock clock;
    auto api_key = api_key_from_env();
    RateLimiter limiter = RateLimiter::for_nvd(api_key.has_value(), clock);
    LiveTransport live(LiveTransportOptions{o.nvd_origin, std::string(kNvdCvePath), api_key},
                       limiter);
    std::unique_ptr<RecordingTransport> recorder;
    Transport* transport = &live;
    if (!o.record.empty()) {
      recorder = std::make_unique<RecordingTransport>(live, o.record);
      transport = recorder.get();
    }
    std::unique_ptr<ResponseCache> cache;
    if (!o.no_cache && o.record.empty()) {
      cache = std::make_unique<ResponseCache>(o.cache_dir.empty() ? DefaultCacheDir()
                                                                  : fs::path(o.cache_dir));
    }
    if (!api_key) {
      err << "note: " << kNvdApiKeyEnv << " not set; using the public rate budget ("
          << RateLimiter::kPublicBudget << " requests per 30 s)\n";
    }
    records = fetch_cves(spec, *transport, FetchOptions{cache.get(), o.parallel});
  }

  CveImportSummary summary;
  DesignModel next = import_cves(model, records, type_id, &summary);
  save_model(next, o.model);
  out << "fetched " << records.size() << " record(s)";
  for (const auto& r : records) out << (&r == &records.front() ? ": " : ", ") << r.id;
  out << "\nadded " << summary.added << ", updated " << summary.updated
      << ", placeholders " << summary.placeholders << " on type " << type_id << "\n";
  return kExitOk;
}

int CmdEdit(const Options& o, const std::string& action, std::ostream& out) {
  DesignModel model = Load(o);
  std::optional<Change> change;
  std::string name = o.name.empty() ? o.id : o.name;
  if (action == "add-component") {
    change = Upsert{Component{EntityId(o.id), name, ToIds(o.types), ToIds(o.controls)}};
  } else if (action == "add-type") {
    change = Upsert{ComponentType{EntityId(o.id), name, ToIds(o.vulns), TypeOrigin::kManual}};
  } else if (action == "add-vuln") {
    VulnerabilityKind kind = infer_kind(o.id);
    if (!o.kind.empty()) {
      auto parsed = parse_vulnerability_kind(o.kind);
      if (!parsed) throw Error(errc::kUsage, "--kind must be mechanism or implementation");
      kind = *parsed;
    }
    change = Upsert{Vulnerability{EntityId(o.id), kind, o.title.empty() ? o.id : o.title,
                                  ToIds(o.parents)}};
  } else if (action == "add-control") {
    change = Upsert{Control{EntityId(o.id), name,
                            o.description.empty() ? std::nullopt
                                                  : std::optional<std::string>(o.description)}};
  } else if (action == "add-rule") {
    change = Upsert{Rule{EntityId(o.id), name, ToIds(o.vulns), ToIds(o.types),
                         ToIds(o.controls)}};
  } else if (action == "delete") {
    change = Delete{Kinds().at(o.kind), EntityId(o.id), o.cascade};
  } else if (action == "link") {
    change = Link{Relations().at(o.relation), EntityId(o.owner), EntityId(o.target)};
  } else if (action == "unlink") {
    change = Unlink{Relations().at(o.relation), EntityId(o.owner), EntityId(o.target)};
  }
  DesignModel next = mutate(model, *change);
  save_model(next, o.model);
  out << action << ": ok\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Evaluate the vulnerability posture of a system design model", "vulnposture"};
  app.require_subcommand(1);
  app.add_flag("--force", o.force, "Load models even if they fail validation");

  auto format_option = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"human", "machine"}));
  };

  auto* init = app.add_subcommand("init", "Create an empty model document");
  init->add_option("model", o.model, "Model path (*.posture.json)")->required();

  auto* validate = app.add_subcommand("validate", "Check model integrity");
  validate->add_option("model", o.model)->required();
  format_option(validate);

  auto* eval = app.add_subcommand(
      "eval", "Evaluate the posture; exit 0 if no component is vulnerable, 2 otherwise");
  eval->add_option("model", o.model)->required();
  eval->add_option("--component", o.components, "Limit the report to these components");
  format_option(eval);

  auto* explain = app.add_subcommand("explain", "Explain a (component, vulnerability) verdict");
  explain->add_option("model", o.model)->required();
  explain->add_option("component", o.component)->required();
  explain->add_option("vulnerability", o.vulnerability)->required();
  format_option(explain);

  auto* import_cwe_cmd = app.add_subcommand("import-cwe", "Import the CWE catalogue");
  import_cwe_cmd->add_option("model", o.model)->required();
  import_cwe_cmd->add_option("source", o.source, "Catalogue XML file or URL")->required();
  import_cwe_cmd->add_option("--view", o.view, "CWE view scoping ChildOf edges");
  import_cwe_cmd->add_flag("--include-deprecated", o.include_deprecated);

  auto* fetch = app.add_subcommand("fetch-cves", "Fetch CVEs for a CPE from NVD and import them");
  fetch->add_option("model", o.model)->required();
  fetch->add_option("--cpe", o.cpe, "CPE 2.3 name to query")->required();
  fetch->add_option("--cwe", o.cwe, "Only CVEs manifesting this CWE");
  fetch->add_option("--type-id", o.type_id, "Component type receiving the CVEs (default: the CPE)");
  fetch->add_flag("--create-type", o.create_type, "Create the component type if missing");
  fetch->add_option("--offline", o.offline, "Replay recorded responses from this fixture directory");
  fetch->add_option("--record", o.record, "Record live responses into this fixture directory");
  fetch->add_option("--cache-dir", o.cache_dir, "Response cache directory");
  fetch->add_flag("--no-cache", o.no_cache);
  fetch->add_option("--results-per-page", o.results_per_page)->check(CLI::Range(1, 2000));
  fetch->add_option("--parallel", o.parallel, "Concurrent page requests")->check(CLI::Range(1, 16));
  fetch->add_option("--nvd-url", o.nvd_origin, "API origin (scheme://host[:port])");

  auto* edit = app.add_subcommand("edit", "Change the model");
  edit->add_option("model", o.model)->required();
  edit->require_subcommand(1);
  auto add_entity = [&](const char* action, const char* help) {
    auto* sub = edit->add_subcommand(action, help);
    sub->add_option("id", o.id)->required();
    return sub;
  };
  auto* add_component = add_entity("add-component", "Add a component");
  add_component->add_option("--name", o.name);
  add_component->add_option("--type", o.types);
  add_component->add_option("--control", o.controls);
  auto* add_type = add_entity("add-type", "Add a component type");
  add_type->add_option("--name", o.name);
  add_type->add_option("--vuln", o.vulns);
  auto* add_vuln = add_entity("add-vuln", "Add a vulnerability");
  add_vuln->add_option("--title", o.title);
  add_vuln->add_option("--kind", o.kind);
  add_vuln->add_option("--parent", o.parents);
  auto* add_control = add_entity("add-control", "Add a security control");
  add_control->add_option("--name", o.name);
  add_control->add_option("--description", o.description);
  auto* add_rule = add_entity("add-rule", "Add a rule");
  add_rule->add_option("--name", o.name);
  add_rule->add_option("--vuln", o.vulns);
  add_rule->add_option("--type", o.types);
  add_rule->add_option("--control", o.controls);
  auto* del = edit->add_subcommand("delete", "Delete an entity");
  del->add_option("kind", o.kind)->required()->check(CLI::IsMember(Keys(Kinds())));
  del->add_option("id", o.id)->required();
  del->add_flag("--cascade", o.cascade, "Also drop every reference to the entity");
  for (const char* action : {"link", "unlink"}) {
    bool add = std::string_view(action) == "link";
    auto* sub = edit->add_subcommand(
        action, std::string(add ? "Add TARGET to" : "Remove TARGET from") +
                    " the RELATION set of OWNER");
    sub->add_option("relation", o.relation)->required()->check(CLI::IsMember(Keys(Relations())));
    sub->add_option("target", o.target)->required();
    sub->add_option("owner", o.owner)->required();
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (init->parsed()) return CmdInit(o, out);
    if (validate->parsed()) return CmdValidate(o, out);
    if (eval->parsed()) return CmdEval(o, out);
    if (explain->parsed()) return CmdExplain(o, out);
    if (import_cwe_cmd->parsed()) return CmdImportCwe(o, out);
    if (fetch->parsed()) return CmdFetchCves(o, out, err);
    for (auto* sub : edit->get_subcommands()) {
      if (sub->parsed()) return CmdEdit(o, sub->get_name(), out);
    }
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace vulnposture
