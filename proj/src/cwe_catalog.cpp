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

#include "vulnposture/cwe_catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <optional>
#include <set>
#include <sstream>

#include <expat.h>

#include "vulnposture/error.hpp"
#include "vulnposture/validate.hpp"

namespace vulnposture {
namespace {

constexpr std::size_t kDescriptionLimit = 512;

const char* Attr(const XML_Char** attrs, const char* name) {
  for (std::size_t i = 0; attrs[i]; i += 2) {
    if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
  }
  return nullptr;
}

bool Digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

std::string Collapse(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  if (out.size() > kDescriptionLimit) {
    out.resize(kDescriptionLimit);
    out += "...";
  }
  return out;
}

class CatalogReader {
 public:
  explicit CatalogReader(const CweParseOptions& options)
      : options_(options), parser_(XML_ParserCreate(nullptr)) {
    if (!parser_) throw Error(errc::kMalformedCatalog, "cannot create XML parser");
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &CatalogReader::OnStart, &CatalogReader::OnEnd);
    XML_SetCharacterDataHandler(parser_, &CatalogReader::OnText);
  }
  ~CatalogReader() { XML_ParserFree(parser_); }
  CatalogReader(const CatalogReader&) = delete;
  CatalogReader& operator=(const CatalogReader&) = delete;

  void Feed(const char* data, std::size_t size, bool final) {
    if (XML_Parse(parser_, data, static_cast<int>(size), final) == XML_STATUS_ERROR) {
      Fail();
    }
  }

  CweCatalog Finish() {
    if (!saw_root_) {
      throw Error(errc::kMalformedCatalog,
                  "no Weakness_Catalog root element at byte offset 0");
    }
    std::set<std::string> known(declared_views_);
    known.insert(referenced_views_.begin(), referenced_views_.end());
    if (!known.empty() && !known.count(options_.view)) {
      throw Error(errc::kUnknownView,
                  "view " + options_.view + " is not present in the catalogue");
    }
    IdSet ids;
    for (const auto& e : catalog_.entries) ids.insert(e.id);
    for (const auto& e : catalog_.entries) {
      for (const auto& p : e.parents) {
        if (!ids.count(p)) catalog_.dangling.emplace_back(e.id, p);
      }
    }
    return std::move(catalog_);
  }

 private:
  static void OnStart(void* self, const XML_Char* name, const XML_Char** attrs) {
    static_cast<CatalogReader*>(self)->Start(name, attrs);
  }
  static void OnEnd(void* self, const XML_Char* name) {
    static_cast<CatalogReader*>(self)->End(name);
  }
  static void OnText(void* self, const XML_Char* text, int len) {
    auto* reader = static_cast<CatalogReader*>(self);
    if (reader->in_description_) reader->text_.append(text, static_cast<std::size_t>(len));
  }

  bool Parent(std::string_view name) const {
    return !stack_.empty() && stack_.back() == name;
  }

  void Start(std::string_view name, const XML_Char** attrs) {
    if (stack_.empty()) {
      if (name != "Weakness_Catalog") {
        Stop("root element is <" + std::string(name) + ">, expected <Weakness_Catalog>");
        return;
      }
      saw_root_ = true;
      if (const char* v = Attr(attrs, "Version")) catalog_.catalog_version = v;
    } else if (name == "View" && Parent("Views")) {
      if (const char* id = Attr(attrs, "ID")) declared_views_.insert(id);
    } else if (name == "Weakness" && Parent("Weaknesses")) {
      StartWeakness(attrs);
    } else if (name == "Related_Weakness" && current_ && Parent("Related_Weaknesses")) {
      const char* nature = Attr(attrs, "Nature");
      const char* target = Attr(attrs, "CWE_ID");
      const char* view = Attr(attrs, "View_ID");
      if (!nature || !target || !Digits(target) || !view) {
        Stop("Related_Weakness of " + current_->id.str() +
             " lacks Nature, CWE_ID or View_ID");
        return;
      }
      referenced_views_.insert(view);
      if (std::strcmp(nature, "ChildOf") == 0 && options_.view == view) {
        current_->parents.insert(EntityId(std::string("CWE-") + target));
      }
    } else if (name == "Description" && current_ && Parent("Weakness")) {
      in_description_ = true;
      text_.clear();
    }
    stack_.emplace_back(name);
  }

  void StartWeakness(const XML_Char** attrs) {
    const char* id = Attr(attrs, "ID");
    if (!id || !Digits(id)) {
      Stop("Weakness element without a numeric ID");
      return;
    }
    current_ = CweEntry{EntityId(std::string("CWE-") + id)};
    if (const char* v = Attr(attrs, "Name")) current_->name = v;
    if (const char* v = Attr(attrs, "Abstraction")) current_->abstraction = v;
    if (const char* v = Attr(attrs, "Status")) current_->status = v;
    current_->deprecated = current_->status == "Deprecated";
  }

  void End(std::string_view name) {
    if (!stack_.empty()) stack_.pop_back();
    if (name == "Description" && in_description_) {
      in_description_ = false;
      current_->description = Collapse(text_);
    } else if (name == "Weakness" && current_ && Parent("Weaknesses")) {
      if (current_->deprecated && !options_.include_deprecated) {
        ++catalog_.deprecated_skipped;
      } else {
        catalog_.entries.push_back(std::move(*current_));
      }
      current_.reset();
    }
  }

  void Stop(std::string message) {
    if (!failure_) {
      failure_ = std::move(message);
      failure_offset_ = XML_GetCurrentByteIndex(parser_);
    }
    XML_StopParser(parser_, XML_FALSE);
  }

  [[noreturn]] void Fail() {
    std::string message;
    long long offset = 0;
    if (failure_) {
      message = *failure_;
      offset = failure_offset_;
    } else {
      message = XML_ErrorString(XML_GetErrorCode(parser_));
      offset = XML_GetCurrentByteIndex(parser_);
    }
    throw Error(errc::kMalformedCatalog,
                "malformed CWE catalogue at byte offset " + std::to_string(offset) +
                    ": " + message);
  }

  const CweParseOptions& options_;
  XML_Parser parser_;
  CweCatalog catalog_;
  std::vector<std::string> stack_;
  std::set<std::string> declared_views_;
  std::set<std::string> referenced_views_;
  std::optional<CweEntry> current_;
  bool in_description_ = false;
  bool saw_root_ = false;
  std::string text_;
  std::optional<std::string> failure_;
  long long failure_offset_ = 0;
};

}  // namespace

CweCatalog parse_cwe_catalog(std::istream& source, const CweParseOptions& options) {
  CatalogReader reader(options);
  std::vector<char> buffer(1 << 16);
  while (source) {
    source.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    std::size_t got = static_cast<std::size_t>(source.gcount());
    reader.Feed(buffer.data(), got, false);
  }
  if (source.bad()) throw Error(errc::kIoFailure, "error reading CWE catalogue");
  reader.Feed(nullptr, 0, true);
  return reader.Finish();
}

CweCatalog parse_cwe_catalog(std::string_view source, const CweParseOptions& options) {
  std::istringstream in{std::string(source)};
  return parse_cwe_catalog(in, options);
}

std::string cwe_definition_url(const EntityId& cwe) {
  return "https://cwe.mitre.org/data/definitions/" + cwe.str().substr(4) + ".html";
}

DesignModel import_cwe(const DesignModel& model, const std::vector<CweEntry>& entries,
                       CweImportSummary* summary) {
  DesignModel next = model;
  CweImportSummary counts;
  IdSet incoming;
  for (const auto& e : entries) incoming.insert(e.id);

  for (const auto& e : entries) {
    auto it = next.vulnerabilities.find(e.id);
    bool exists = it != next.vulnerabilities.end();
    Vulnerability v = exists ? it->second : Vulnerability{e.id};
    v.kind = VulnerabilityKind::kMechanism;
    v.title = e.name;
    v.placeholder = false;
    VulnerabilityMetadata meta = v.metadata.value_or(VulnerabilityMetadata{});
    meta.description = e.description.empty() ? std::nullopt
                                             : std::optional<std::string>(e.description);
    meta.abstraction_level = e.abstraction.empty()
                                 ? std::nullopt
                                 : std::optional<std::string>(e.abstraction);
    meta.source_url = cwe_definition_url(e.id);
    v.metadata = std::move(meta);
    for (const auto& parent : e.parents) {
      if (incoming.count(parent) || next.vulnerabilities.count(parent)) {
        v.avulns.insert(parent);
        ++counts.edges;
      } else {
        ++counts.dropped_edges;
      }
    }
    ++(exists ? counts.updated : counts.added);
    put(next, std::move(v));
  }

  if (auto cycles = abstraction_cycles(next); !cycles.empty()) {
    std::string ids;
    for (const auto& id : cycles.front()) ids += (ids.empty() ? "" : ", ") + id.str();
    throw Error(errc::kWouldCreateCycle,
                "catalogue import would create an abstraction cycle among: " + ids);
  }
  if (summary) *summary = counts;
  return next;
}

}  // namespace vulnposture
