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

#include "vulnposture/ids.hpp"

#include <algorithm>
#include <cctype>

#include "vulnposture/cpe.hpp"
#include "vulnposture/error.hpp"

namespace vulnposture {
namespace {

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

EntityId::EntityId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw Error(errc::kMalformedId, "entity id is empty");
}

IdScheme scheme_of(std::string_view id) {
  if (StartsWith(id, "CWE-")) return IdScheme::kCwe;
  if (StartsWith(id, "CVE-")) return IdScheme::kCve;
  if (StartsWith(id, "cpe:")) return IdScheme::kCpe;
  return IdScheme::kFreeForm;
}

bool is_canonical_cwe(std::string_view id) {
  return StartsWith(id, "CWE-") && AllDigits(id.substr(4));
}

bool is_canonical_cve(std::string_view id) {
  if (!StartsWith(id, "CVE-")) return false;
  std::string_view rest = id.substr(4);
  auto dash = rest.find('-');
  if (dash == std::string_view::npos) return false;
  std::string_view year = rest.substr(0, dash);
  std::string_view seq = rest.substr(dash + 1);
  return year.size() == 4 && AllDigits(year) && seq.size() >= 4 &&
         AllDigits(seq);
}

std::optional<std::string> id_form_problem(std::string_view id) {
  if (id.empty()) return "id is empty";
  switch (scheme_of(id)) {
    case IdScheme::kCwe:
      if (!is_canonical_cwe(id)) return "expected CWE-<digits>";
      break;
    case IdScheme::kCve:
      if (!is_canonical_cve(id)) return "expected CVE-<yyyy>-<nnnn...>";
      break;
    case IdScheme::kCpe:
      if (!Cpe23::parse(id)) return "not a CPE 2.3 formatted string";
      break;
    case IdScheme::kFreeForm:
      break;
  }
  return std::nullopt;
}

}  // namespace vulnposture
