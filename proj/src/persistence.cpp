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

#include "vulnposture/persistence.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "vulnposture/error.hpp"

namespace vulnposture {
namespace {

using nlohmann::json;

json Ids(const IdSet& ids) {
  json out = json::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

// Optional id array: absent and empty are the same.
IdSet ReadIds(const json& record, const char* key) {
  IdSet out;
  if (auto it = record.find(key); it != record.end()) {
    for (const auto& item : *it) out.insert(EntityId(item.get<std::string>()));
  }
  return out;
}

std::string ReadString(const json& record, const char* key) {
  auto it = record.find(key);
  return it == record.end() ? std::string() : it->get<std::string>();
}

std::optional<std::string> ReadOptional(const json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

EntityId ReadId(const json& record) {
  return EntityId(record.at("id").get<std::string>());
}

void PutOptional(json& out, const char* key, const std::optional<std::string>& v) {
  if (v) out[key] = *v;
}

// Schema 1 predates type origins, explicit vulnerability kinds and
// placeholders; those fields are filled with their defaults.
void MigrateV1(json& doc) {
  for (auto& t : doc["component_types"]) {
    if (!t.contains("origin")) t["origin"] = "manual";
  }
  for (auto& v : doc["vulnerabilities"]) {
    if (!v.contains("kind")) {
      v["kind"] = to_string(infer_kind(v.at("id").get<std::string>()));
    }
    if (!v.contains("placeholder")) v["placeholder"] = false;
  }
  doc["schema_version"] = 2;
}

template <typename Map, typename Entity>
void Add(Map& map, Entity entity, std::string_view kind,
         std::vector<Finding>& duplicates) {
  auto id = entity.id;
  if (!map.emplace(id, std::move(entity)).second) {
    duplicates.push_back({Severity::kError, finding_code::kDuplicateId, id.str(),
                          std::string(kind) + " id '" + id.str() +
                              "' appears more than once"});
  }
}

std::string LineColumn(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

json model_to_json(const DesignModel& model) {
  json doc;
  doc["schema_version"] = DesignModel::kSchemaVersion;

  doc["components"] = json::array();
  for (const auto& [id, c] : model.components) {
    doc["components"].push_back({{"id", id.str()},
                                 {"name", c.name},
                                 {"types", Ids(c.types)},
                                 {"controls", Ids(c.controls)}});
  }
  doc["component_types"] = json::array();
  for (const auto& [id, t] : model.component_types) {
    doc["component_types"].push_back({{"id", id.str()},
                                      {"name", t.name},
                                      {"origin", to_string(t.origin)},
                                      {"vulns", Ids(t.vulns)}});
  }
  doc["vulnerabilities"] = json::array();
  for (const auto& [id, v] : model.vulnerabilities) {
    json record{{"id", id.str()},
                {"kind", to_string(v.kind)},
                {"title", v.title},
                {"avulns", Ids(v.avulns)},
                {"placeholder", v.placeholder}};
    if (v.metadata) {
      json meta = json::object();
      PutOptional(meta, "description", v.metadata->description);
      PutOptional(meta, "severity", v.metadata->severity);
      PutOptional(meta, "source_url", v.metadata->source_url);
      PutOptional(meta, "abstraction_level", v.metadata->abstraction_level);
      record["metadata"] = std::move(meta);
    }
    doc["vulnerabilities"].push_back(std::move(record));
  }
  doc["controls"] = json::array();
  for (const auto& [id, s] : model.controls) {
    json record{{"id", id.str()}, {"name", s.name}};
    PutOptional(record, "description", s.description);
    doc["controls"].push_back(std::move(record));
  }
  doc["rules"] = json::array();
  for (const auto& [id, r] : model.rules) {
    doc["rules"].push_back({{"id", id.str()},
                            {"name", r.name},
                            {"rvulns", Ids(r.rvulns)},
                            {"rtypes", Ids(r.rtypes)},
                            {"rcontrols", Ids(r.rcontrols)}});
  }
  return doc;
}

std::string serialize_model(const DesignModel& model) {
  return model_to_json(model).dump(2) + "\n";
}

LoadedModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(errc::kParseFailure,
                "model document is not valid JSON at " + LineColumn(text, e.byte) +
                    ": " + e.what());
  }

  LoadedModel loaded;
  std::vector<Finding> duplicates;
  try {
    if (!doc.is_object()) throw Error(errc::kParseFailure, "model document must be an object");
    int version = doc.at("schema_version").get<int>();
    if (version > DesignModel::kSchemaVersion) {
      throw Error(errc::kSchemaTooNew,
                  "schema_version " + std::to_string(version) +
                      " is newer than supported version " +
                      std::to_string(DesignModel::kSchemaVersion));
    }
    if (version < 1) {
      throw Error(errc::kParseFailure,
                  "invalid schema_version " + std::to_string(version));
    }
    for (const char* section : {"components", "component_types", "vulnerabilities",
                                "controls", "rules"}) {
      if (!doc.contains(section)) doc[section] = json::array();
    }
    if (version == 1) MigrateV1(doc);

    DesignModel& m = loaded.model;
    for (const auto& r : doc["components"]) {
      Add(m.components,
          Component{ReadId(r), ReadString(r, "name"), ReadIds(r, "types"),
                    ReadIds(r, "controls")},
          "component", duplicates);
    }
    for (const auto& r : doc["component_types"]) {
      auto origin = parse_type_origin(r.at("origin").get<std::string>());
      if (!origin) throw Error(errc::kParseFailure, "unknown origin in " + r.dump());
      Add(m.component_types,
          ComponentType{ReadId(r), ReadString(r, "name"), ReadIds(r, "vulns"), *origin},
          "component type", duplicates);
    }
    for (const auto& r : doc["vulnerabilities"]) {
      auto kind = parse_vulnerability_kind(r.at("kind").get<std::string>());
      if (!kind) throw Error(errc::kParseFailure, "unknown kind in " + r.dump());
      Vulnerability v{ReadId(r), *kind, ReadString(r, "title"), ReadIds(r, "avulns")};
      v.placeholder = r.value("placeholder", false);
      if (auto it = r.find("metadata"); it != r.end() && !it->is_null()) {
        v.metadata = VulnerabilityMetadata{
            ReadOptional(*it, "description"), ReadOptional(*it, "severity"),
            ReadOptional(*it, "source_url"), ReadOptional(*it, "abstraction_level")};
      }
      Add(m.vulnerabilities, std::move(v), "vulnerability", duplicates);
    }
    for (const auto& r : doc["controls"]) {
      Add(m.controls,
          Control{ReadId(r), ReadString(r, "name"), ReadOptional(r, "description")},
          "control", duplicates);
    }
    for (const auto& r : doc["rules"]) {
      Add(m.rules,
          Rule{ReadId(r), ReadString(r, "name"), ReadIds(r, "rvulns"),
               ReadIds(r, "rtypes"), ReadIds(r, "rcontrols")},
          "rule", duplicates);
    }
  } catch (const json::exception& e) {
    throw Error(errc::kParseFailure, std::string("model document: ") + e.what());
  }

  loaded.findings = validate_model(loaded.model);
  loaded.findings.findings.insert(loaded.findings.findings.begin(),
                                  duplicates.begin(), duplicates.end());
  return loaded;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::kIoFailure, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(errc::kIoFailure, "error reading " + path.string());
  return buffer.str();
}

LoadedModel read_model(const std::filesystem::path& path) {
  return parse_model(read_file(path));
}

DesignModel load_model(const std::filesystem::path& path, LoadOptions options) {
  LoadedModel loaded = read_model(path);
  if (loaded.findings.has_errors() && !options.force) {
    const Finding& first = loaded.findings.findings.front();
    throw Error(errc::kInvalidModel,
                path.string() + ": " + std::to_string(loaded.findings.error_count()) +
                    " validation error(s); first: [" + first.code + "] " +
                    first.message);
  }
  return std::move(loaded.model);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::kIoFailure, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(errc::kIoFailure, "error writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(errc::kIoFailure,
                "cannot rename into " + path.string() + ": " + ec.message());
  }
}

void save_model(const DesignModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model));
}

}  // namespace vulnposture
