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

#ifndef VULNPOSTURE_VALIDATE_HPP_
#define VULNPOSTURE_VALIDATE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "vulnposture/model.hpp"

namespace vulnposture {

enum class Severity { kError, kWarning };

std::string_view to_string(Severity severity);

namespace finding_code {
inline constexpr const char* kDanglingReference = "dangling-reference";
inline constexpr const char* kDuplicateId = "duplicate-id";
inline constexpr const char* kAbstractionCycle = "abstraction-cycle";
inline constexpr const char* kMalformedId = "malformed-id";
inline constexpr const char* kInertRule = "inert-rule";
inline constexpr const char* kRuleWithoutControls = "rule-without-controls";
}  // namespace finding_code

struct Finding {
  Severity severity;
  std::string code;
  std::string subject;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool has_errors() const;
  std::size_t error_count() const;
  std::size_t warning_count() const;
};

// Findings are data: errors for dangling references, abstraction cycles and
// malformed ids; warnings for rules that can never apply or that require no
// controls. An empty error list means the model admits reasoning. Findings
// are sorted (errors first, then code, then subject).
ValidationReport validate_model(const DesignModel& model);

// Every strongly connected component of the avulns graph that contains a
// cycle (including self-edges), each sorted, listed in order of smallest id.
// Dangling parent ids are ignored.
std::vector<std::vector<EntityId>> abstraction_cycles(const DesignModel& model);

// True when `to` is reachable from `from` by following zero or more avulns
// edges.
bool abstraction_reaches(const DesignModel& model, const EntityId& from,
                         const EntityId& to);

}  // namespace vulnposture

#endif  // VULNPOSTURE_VALIDATE_HPP_
