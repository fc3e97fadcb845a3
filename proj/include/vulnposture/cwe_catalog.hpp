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

#ifndef VULNPOSTURE_CWE_CATALOG_HPP_
#define VULNPOSTURE_CWE_CATALOG_HPP_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vulnposture/model.hpp"

namespace vulnposture {

inline constexpr std::string_view kResearchConceptsView = "1000";

struct CweEntry {
  EntityId id;  // CWE-<digits>
  std::string name;
  std::string abstraction;  // Pillar/Class/Base/Variant, stored verbatim
  std::string status;
  bool deprecated = false;
  IdSet parents;  // ChildOf targets within the selected view
  std::string description;  // whitespace-collapsed excerpt

  friend bool operator==(const CweEntry&, const CweEntry&) = default;
};

struct CweParseOptions {
  std::string view = std::string(kResearchConceptsView);
  bool include_deprecated = false;
};

struct CweCatalog {
  std::string catalog_version;  // Weakness_Catalog/@Version, if present
  std::vector<CweEntry> entries;  // document order
  std::size_t deprecated_skipped = 0;
  // (child, parent) pairs whose parent is not among `entries`.
  std::vector<std::pair<EntityId, EntityId>> dangling;
};

// Reads the official CWE XML export. Parent edges come only from
// Related_Weakness elements with Nature="ChildOf" in `options.view`; other
// natures and views are ignored. Throws `malformed-catalog` (with byte offset)
// or `unknown-view` when the catalogue names views but not the selected one.
CweCatalog parse_cwe_catalog(std::istream& source, const CweParseOptions& options = {});
CweCatalog parse_cwe_catalog(std::string_view source, const CweParseOptions& options = {});

struct CweImportSummary {
  std::size_t added = 0;
  std::size_t updated = 0;
  std::size_t edges = 0;          // abstraction edges taken from the catalogue
  std::size_t dropped_edges = 0;  // parents neither imported nor in the model

  friend bool operator==(const CweImportSummary&, const CweImportSummary&) = default;
};

// Upserts each entry as a mechanism vulnerability. ChildOf edges become
// avulns (child to parent) when the parent is among `entries` or already in
// the model; other parents are dropped and counted. Existing avulns are kept,
// so re-import is idempotent. Throws `would-create-cycle` and leaves nothing
// imported if the result would contain an abstraction cycle.
DesignModel import_cwe(const DesignModel& model, const std::vector<CweEntry>& entries,
                       CweImportSummary* summary = nullptr);

std::string cwe_definition_url(const EntityId& cwe);

}  // namespace vulnposture

#endif  // VULNPOSTURE_CWE_CATALOG_HPP_
