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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "testing/scenarios.hpp"
#include "vulnposture/error.hpp"
#include "vulnposture/mutate.hpp"
#include "vulnposture/persistence.hpp"
#include "vulnposture/validate.hpp"

namespace vulnposture {
namespace {

namespace fs = std::filesystem;
using namespace literals;

const fs::path kCwe = fs::path(VULNPOSTURE_FIXTURES) / "cwe";

// Counted by hand in cwec_excerpt.xml before the parser existed.
constexpr std::size_t kExcerptEntries = 20;
constexpr std::size_t kExcerptDeprecated = 1;
constexpr std::size_t kExcerptView1000Edges = 26;
constexpr std::size_t kExcerptView1003Edges = 3;
constexpr const char* kCwe119Name =
    "Improper Restriction of Operations within the Bounds of a Memory Buffer";

CweCatalog Parse(const char* file, CweParseOptions options = {}) {
  std::ifstream in(kCwe / file, std::ios::binary);
  return parse_cwe_catalog(in, options);
}

std::size_t EdgeCount(const CweCatalog& c) {
  std::size_t n = 0;
  for (const auto& e : c.entries) n += e.parents.size();
  return n;
}

const CweEntry& Find(const CweCatalog& c, const char* id) {
  for (const auto& e : c.entries) {
    if (e.id.str() == id) return e;
  }
  throw std::runtime_error(std::string("no entry ") + id);
}

std::string CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

TEST(CweCatalogTest, ExcerptCountsMatchGroundTruth) {
  CweCatalog c = Parse("cwec_excerpt.xml");
  EXPECT_EQ(c.catalog_version, "4.16");
  EXPECT_EQ(c.entries.size(), kExcerptEntries);
  EXPECT_EQ(c.deprecated_skipped, kExcerptDeprecated);
  EXPECT_EQ(EdgeCount(c), kExcerptView1000Edges);
  EXPECT_TRUE(c.dangling.empty());
}

TEST(CweCatalogTest, Cwe119Details) {
  CweCatalog c = Parse("cwec_excerpt.xml");
  const CweEntry& e = Find(c, "CWE-119");
  EXPECT_EQ(e.name, kCwe119Name);
  EXPECT_EQ(e.abstraction, "Class");
  EXPECT_EQ(e.status, "Stable");
  EXPECT_FALSE(e.deprecated);
  // The view-700 ChildOf edge to CWE-20 is ignored.
  EXPECT_EQ(e.parents, IdSet{"CWE-118"_id});
  EXPECT_FALSE(e.description.empty());
  EXPECT_EQ(e.description.find("  "), std::string::npos);
}

TEST(CweCatalogTest, OnlyChildOfCountsAsParent) {
  CweCatalog c = Parse("cwec_excerpt.xml");
  // CanFollow CWE-822 is not an abstraction edge.
  EXPECT_EQ(Find(c, "CWE-787").parents, IdSet{"CWE-119"_id});
  EXPECT_EQ(Find(c, "CWE-416").parents, (IdSet{"CWE-672"_id, "CWE-825"_id}));
  EXPECT_TRUE(Find(c, "CWE-664").parents.empty());
}

TEST(CweCatalogTest, ViewSelection) {
  CweParseOptions opts;
  opts.view = "1003";
  CweCatalog c = Parse("cwec_excerpt.xml", opts);
  EXPECT_EQ(c.entries.size(), kExcerptEntries);
  EXPECT_EQ(EdgeCount(c), kExcerptView1003Edges);
  EXPECT_TRUE(Find(c, "CWE-119").parents.empty());

  opts.view = "700";
  c = Parse("cwec_excerpt.xml", opts);
  EXPECT_EQ(EdgeCount(c), 1u);
  ASSERT_EQ(c.dangling.size(), 1u);
  EXPECT_EQ(c.dangling[0], std::make_pair("CWE-119"_id, "CWE-20"_id));

  opts.view = "4242";
  EXPECT_EQ(CodeOf([&] { Parse("cwec_excerpt.xml", opts); }), errc::kUnknownView);
}

TEST(CweCatalogTest, DeprecatedEntriesOnRequest) {
  CweParseOptions opts;
  opts.include_deprecated = true;
  CweCatalog c = Parse("cwec_excerpt.xml", opts);
  EXPECT_EQ(c.entries.size(), kExcerptEntries + kExcerptDeprecated);
  EXPECT_EQ(c.deprecated_skipped, 0u);
  EXPECT_TRUE(Find(c, "CWE-1187").deprecated);
}

TEST(CweCatalogTest, MalformedInputIsReported) {
  try {
    Parse("truncated_broken.xml");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::kMalformedCatalog);
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos) << e.what();
  }
  EXPECT_EQ(CodeOf([] { parse_cwe_catalog(std::string_view("not xml at all")); }),
            errc::kMalformedCatalog);
}

TEST(CweCatalogTest, EmptyCatalogue) {
  CweCatalog c = Parse("empty_catalog.xml");
  EXPECT_TRUE(c.entries.empty());
  CweImportSummary s;
  DesignModel m = import_cwe(DesignModel{}, c.entries, &s);
  EXPECT_TRUE(m.vulnerabilities.empty());
  EXPECT_EQ(s, CweImportSummary{});
}

TEST(CweCatalogTest, ImportBuildsAbstractionGraph) {
  CweCatalog c = Parse("cwec_excerpt.xml");
  CweImportSummary s;
  DesignModel m = import_cwe(DesignModel{}, c.entries, &s);
  EXPECT_EQ(s.added, kExcerptEntries);
  EXPECT_EQ(s.updated, 0u);
  EXPECT_EQ(s.edges, kExcerptView1000Edges);
  EXPECT_EQ(s.dropped_edges, 0u);
  EXPECT_FALSE(validate_model(m).has_errors());
  const Vulnerability& v = m.vulnerabilities.at("CWE-119"_id);
  EXPECT_EQ(v.title, kCwe119Name);
  EXPECT_EQ(v.kind, VulnerabilityKind::kMechanism);
  EXPECT_EQ(v.avulns, IdSet{"CWE-118"_id});
  ASSERT_TRUE(v.metadata);
  EXPECT_EQ(v.metadata->source_url, "https://cwe.mitre.org/data/definitions/119.html");
  EXPECT_EQ(v.metadata->abstraction_level, "Class");
}

TEST(CweCatalogTest, ReimportIsIdempotent) {
  CweCatalog c = Parse("cwec_excerpt.xml");
  DesignModel once = import_cwe(DesignModel{}, c.entries);
  CweImportSummary s;
  DesignModel twice = import_cwe(once, c.entries, &s);
  EXPECT_EQ(serialize_model(once), serialize_model(twice));
  EXPECT_EQ(s.added, 0u);
  EXPECT_EQ(s.updated, kExcerptEntries);
}

TEST(CweCatalogTest, SingleEntryDropsUnknownParent) {
  CweCatalog c = Parse("cwe119_only.xml");
  ASSERT_EQ(c.entries.size(), 1u);
  CweImportSummary s;
  DesignModel m = import_cwe(DesignModel{}, c.entries, &s);
  EXPECT_EQ(m.vulnerabilities.size(), 1u);
  EXPECT_TRUE(m.vulnerabilities.at("CWE-119"_id).avulns.empty());
  EXPECT_EQ(s, (CweImportSummary{1, 0, 0, 1}));

  // With the parent already modelled, the edge is kept.
  DesignModel with_parent;
  put(with_parent, Vulnerability{"CWE-118"_id});
  DesignModel linked = import_cwe(with_parent, c.entries, &s);
  EXPECT_EQ(linked.vulnerabilities.at("CWE-119"_id).avulns, IdSet{"CWE-118"_id});
  EXPECT_EQ(s, (CweImportSummary{1, 0, 1, 0}));
}

TEST(CweCatalogTest, ImportResolvesPlaceholdersAndKeepsLinks) {
  DesignModel m = testing::scenario_a();
  m.vulnerabilities.at("CWE-119"_id).placeholder = true;
  m.vulnerabilities.at("CWE-119"_id).title = "CWE-119";
  DesignModel after = import_cwe(m, Parse("cwec_excerpt.xml").entries);
  const Vulnerability& v = after.vulnerabilities.at("CWE-119"_id);
  EXPECT_FALSE(v.placeholder);
  EXPECT_EQ(v.title, kCwe119Name);
  EXPECT_EQ(after.rules, m.rules);
  EXPECT_EQ(after.component_types, m.component_types);
}

TEST(CweCatalogTest, ImportRefusesCycles) {
  DesignModel m;
  // Existing edge CWE-118 -> CWE-119 closes a loop with the catalogue's
  // CWE-119 -> CWE-118.
  put(m, Vulnerability{"CWE-119"_id});
  put(m, Vulnerability{"CWE-118"_id, VulnerabilityKind::kMechanism, "", {"CWE-119"_id}});
  EXPECT_EQ(CodeOf([&] { import_cwe(m, Parse("cwe119_only.xml").entries); }),
            errc::kWouldCreateCycle);
}

}  // namespace
}  // namespace vulnposture
