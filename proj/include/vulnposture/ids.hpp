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

#ifndef VULNPOSTURE_IDS_HPP_
#define VULNPOSTURE_IDS_HPP_

#include <compare>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

namespace vulnposture {

// Non-empty, case-sensitive identifier of a model entity. Ids are join keys
// across catalogues ("CWE-119", "CVE-2020-10565", CPE strings), so they are
// kept distinct from display names.
class EntityId {
 public:
  explicit EntityId(std::string value);

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const EntityId&, const EntityId&) = default;
  friend bool operator==(const EntityId&, const EntityId&) = default;

 private:
  std::string value_;
};

inline std::ostream& operator<<(std::ostream& os, const EntityId& id) {
  return os << id.str();
}

using IdSet = std::set<EntityId>;

namespace literals {
inline EntityId operator""_id(const char* s, std::size_t n) {
  return EntityId(std::string(s, n));
}
}  // namespace literals

enum class IdScheme { kFreeForm, kCwe, kCve, kCpe };

// Classifies by prefix only: "CWE-", "CVE-" and "cpe:" claim a scheme whose
// canonical form is then mandatory.
IdScheme scheme_of(std::string_view id);

bool is_canonical_cwe(std::string_view id);  // CWE-<digits>
bool is_canonical_cve(std::string_view id);  // CVE-<4 digits>-<4+ digits>

// nullopt when `id` is acceptable; otherwise a short description of the
// problem.
std::optional<std::string> id_form_problem(std::string_view id);

}  // namespace vulnposture

#endif  // VULNPOSTURE_IDS_HPP_
