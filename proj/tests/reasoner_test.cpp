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

#include <gtest/gtest.h>

#include <future>

#include "testing/oracle.hpp"
#include "testing/scenarios.hpp"
#include "vulnposture/error.hpp"
#include "vulnposture/mutate.hpp"

namespace vulnposture {
namespace {

using namespace literals;
using testing::kFreeBsd14;

const EntityId kFreeBsd{std::string(kFreeBsd14)};

DesignModel WithControl(DesignModel m, const EntityId& component, const EntityId& control) {
  return mutate(m, Link{Relation::kComponentControl, component, control});
}

// Scenario A plus the FreeBSD type carrying both CVEs (each manifesting
// CWE-119) on OperatingSystem.
DesignModel FreeBsdModel() {
  DesignModel m = WithControl(testing::scenario_a(), "Application"_id,
                              "use_memory_safe_languages"_id);
  m = mutate(m, Upsert{ComponentType{kFreeBsd, "FreeBSD 14.0", {}, TypeOrigin::kNvdImport}});
  for (const char* cve : {"CVE-2011-2895", "CVE-2020-10565"}) {
    m = mutate(m, Upsert{Vulnerability{EntityId(cve), VulnerabilityKind::kImplementation, cve,
                                       {"CWE-119"_id}}});
    m = mutate(m, Link{Relation::kTypeVulnerability, kFreeBsd, EntityId(cve)});
  }
  return mutate(m, Link{Relation::kComponentType, "OperatingSystem"_id, kFreeBsd});
}

DesignModel Rule4Model() {
  DesignModel m = FreeBsdModel();
  m = mutate(m, Upsert{Control{"capability_based_addressing_hardware"_id, "capability hw"}});
  m = mutate(m, Upsert{Rule{"rule4"_id, "rule4", {"CWE-119"_id}, {kFreeBsd},
                            {"capability_based_addressing_hardware"_id}}});
  return WithControl(m, "OperatingSystem"_id, "capability_based_addressing_hardware"_id);
}

TEST(ReasonerTest, CvulnsIsUnionOverTypes) {
  DesignModel m = FreeBsdModel();
  Reasoner r(m);
  EXPECT_EQ(r.cvulns("Application"_id), IdSet{"CWE-119"_id});
  EXPECT_EQ(r.cvulns("OperatingSystem"_id), (IdSet{"CVE-2011-2895"_id, "CVE-2020-10565"_id}));
  m = mutate(m, Upsert{Component{"Bare"_id, "Bare"}});
  EXPECT_TRUE(cvulns(m, "Bare"_id).empty());
}

TEST(ReasonerTest, ScenarioAViolatedWithoutControl) {
  DesignModel m = testing::scenario_a();
  Reasoner r(m);
  EXPECT_FALSE(r.mitigated_v("CWE-119"_id, "Application"_id));
  EXPECT_FALSE(r.mitigated("CWE-119"_id, "Application"_id));
  EXPECT_EQ(r.vulnerable("Application"_id), (VulnerableResult{true, {"CWE-119"_id}}));
  PostureReport report = r.check_design();
  EXPECT_FALSE(report.property_holds);
  EXPECT_EQ(report.counterexamples(),
            (std::vector<ComponentVulnerability>{{"Application"_id, "CWE-119"_id}}));
}

TEST(ReasonerTest, ScenarioASatisfiedWithControl) {
  DesignModel m = WithControl(testing::scenario_a(), "Application"_id,
                              "use_memory_safe_languages"_id);
  Reasoner r(m);
  auto w = r.mitigated_v("CWE-119"_id, "Application"_id);
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (MitigationWitness{"rule1"_id, "internally_developed_application"_id}));
  EXPECT_EQ(r.vulnerable("Application"_id), (VulnerableResult{false, {}}));
  EXPECT_TRUE(r.check_design().property_holds);
}

TEST(ReasonerTest, RuleWithoutControlsMitigatesUnconditionally) {
  DesignModel m = testing::scenario_a();
  m = mutate(m, Upsert{Rule{"accept"_id, "accept", {"CWE-119"_id},
                            {"internally_developed_application"_id}}});
  EXPECT_TRUE(mitigated_v(m, "CWE-119"_id, "Application"_id));
}

TEST(ReasonerTest, WitnessIsLowestRuleId) {
  DesignModel m = WithControl(testing::scenario_a(), "Application"_id,
                              "use_memory_safe_languages"_id);
  m = mutate(m, Upsert{Rule{"rule0"_id, "rule0", {"CWE-119"_id},
                            {"internally_developed_application"_id}}});
  EXPECT_EQ(mitigated_v(m, "CWE-119"_id, "Application"_id)->rule, "rule0"_id);
}

TEST(ReasonerTest, LeafWithoutRulesIsUnmitigated) {
  DesignModel m = testing::scenario_a();
  m = mutate(m, Delete{EntityKind::kRule, "rule1"_id});
  EXPECT_FALSE(mitigated(m, "CWE-119"_id, "Application"_id));
  ExplanationNode n = explain(m, "Application"_id, "CWE-119"_id);
  EXPECT_EQ(n.basis, BasisKind::kNone);
  EXPECT_TRUE(n.candidates.empty());
  EXPECT_TRUE(n.children.empty());
}

TEST(ReasonerTest, PatchRulesMitigateBothCves) {
  DesignModel m = FreeBsdModel();
  EXPECT_EQ(vulnerable(m, "OperatingSystem"_id),
            (VulnerableResult{true, {"CVE-2011-2895"_id, "CVE-2020-10565"_id}}));
  for (const char* cve : {"CVE-2011-2895", "CVE-2020-10565"}) {
    EntityId control("patch_" + std::string(cve));
    m = mutate(m, Upsert{Control{control, control.str()}});
    m = mutate(m, Upsert{Rule{EntityId(std::string("rule_") + cve), "patch",
                              {EntityId(cve)}, {kFreeBsd}, {control}}});
    m = WithControl(m, "OperatingSystem"_id, control);
  }
  EXPECT_EQ(vulnerable(m, "OperatingSystem"_id), (VulnerableResult{false, {}}));
  EXPECT_TRUE(check_design(m).property_holds);
}

TEST(ReasonerTest, AbstractionMitigatesThroughCwe119) {
  DesignModel m = Rule4Model();
  Reasoner r(m);
  EXPECT_FALSE(r.mitigated_v("CVE-2020-10565"_id, "OperatingSystem"_id));
  EXPECT_TRUE(r.mitigated("CVE-2020-10565"_id, "OperatingSystem"_id));
  EXPECT_TRUE(r.check_design().property_holds);

  ExplanationNode n = r.explain("OperatingSystem"_id, "CVE-2011-2895"_id);
  EXPECT_EQ(n.verdict, Verdict::kMitigated);
  EXPECT_EQ(n.basis, BasisKind::kAbstraction);
  ASSERT_EQ(n.children.size(), 1u);
  EXPECT_EQ(n.children[0].vulnerability, "CWE-119"_id);
  EXPECT_EQ(n.children[0].basis, BasisKind::kDirectRule);
  EXPECT_EQ(n.children[0].witness, (MitigationWitness{"rule4"_id, kFreeBsd}));
  EXPECT_EQ(testing::check_explanation(m, "OperatingSystem"_id, n), "");
}

TEST(ReasonerTest, ParentOutsideCvulnsStillCounts) {
  // CWE-119 is not in VULNS of the FreeBSD type, yet mitigating it for the
  // component mitigates its children.
  DesignModel m = Rule4Model();
  EXPECT_FALSE(cvulns(m, "OperatingSystem"_id).count("CWE-119"_id));
  EXPECT_TRUE(mitigated(m, "CWE-119"_id, "OperatingSystem"_id));
}

TEST(ReasonerTest, ExplainUnmitigatedListsCandidates) {
  ExplanationNode n = explain(testing::scenario_a(), "Application"_id, "CWE-119"_id);
  EXPECT_EQ(n.verdict, Verdict::kUnmitigated);
  EXPECT_EQ(n.basis, BasisKind::kNone);
  ASSERT_EQ(n.candidates.size(), 1u);
  EXPECT_EQ(n.candidates[0],
            (CandidateRule{"rule1"_id, true, {"use_memory_safe_languages"_id}}));
}

TEST(ReasonerTest, ExplainReportsTypeMismatch) {
  DesignModel m = FreeBsdModel();
  ExplanationNode n = explain(m, "OperatingSystem"_id, "CVE-2020-10565"_id);
  EXPECT_EQ(n.basis, BasisKind::kNone);
  ASSERT_EQ(n.children.size(), 1u);
  ASSERT_EQ(n.children[0].candidates.size(), 1u);
  EXPECT_FALSE(n.children[0].candidates[0].type_matched);
  EXPECT_EQ(testing::check_explanation(m, "OperatingSystem"_id, n), "");
}

TEST(ReasonerTest, ExplainRejectsInapplicablePairs) {
  DesignModel m = testing::scenario_a();
  try {
    explain(m, "OperatingSystem"_id, "CWE-119"_id);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::kNotApplicable);
  }
}

TEST(ReasonerTest, UnknownIdsAreReported) {
  DesignModel m = testing::scenario_a();
  Reasoner r(m);
  try {
    r.vulnerable("Nobody"_id);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::kUnknownComponent);
  }
  try {
    r.mitigated("CWE-1"_id, "Application"_id);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::kUnknownVulnerability);
  }
}

TEST(ReasonerTest, RefusesInvalidModels) {
  DesignModel m = testing::scenario_a();
  m.vulnerabilities.at("CWE-119"_id).avulns.insert("CWE-119"_id);
  try {
    Reasoner r(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::kInvalidModel);
  }
}

TEST(ReasonerTest, EmptyModelHolds) {
  PostureReport r = check_design(DesignModel{});
  EXPECT_TRUE(r.property_holds);
  EXPECT_TRUE(r.per_component.empty());
}

TEST(ReasonerTest, DeepChainsAreTruncated) {
  DesignModel m;
  const int n = kMaxExplanationDepth + 5;
  put(m, Vulnerability{EntityId("CWE-" + std::to_string(n))});
  for (int i = n - 1; i >= 0; --i) {
    put(m, Vulnerability{EntityId("CWE-" + std::to_string(i)), VulnerabilityKind::kMechanism,
                         "", {EntityId("CWE-" + std::to_string(i + 1))}});
  }
  put(m, ComponentType{"t"_id, "t", {"CWE-0"_id}});
  put(m, Component{"c"_id, "c", {"t"_id}});
  ExplanationNode node = explain(m, "c"_id, "CWE-0"_id);
  int depth = 0;
  const ExplanationNode* cur = &node;
  while (!cur->children.empty()) {
    cur = &cur->children[0];
    ++depth;
  }
  EXPECT_EQ(depth, kMaxExplanationDepth);
  EXPECT_TRUE(cur->truncated);
  EXPECT_EQ(testing::check_explanation(m, "c"_id, node), "");
}

TEST(ReasonerTest, SharedReasonerAcrossThreads) {
  DesignModel m = Rule4Model();
  Reasoner r(m);
  PostureReport expected = r.check_design();
  std::vector<std::future<PostureReport>> runs;
  for (int i = 0; i < 8; ++i) {
    runs.push_back(std::async(std::launch::async, [&r] { return r.check_design(); }));
  }
  for (auto& f : runs) EXPECT_EQ(f.get(), expected);
}

}  // namespace
}  // namespace vulnposture
