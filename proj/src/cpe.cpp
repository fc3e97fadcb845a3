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

#include "vulnposture/cpe.hpp"

#include <cctype>
#include <vector>

namespace vulnposture {
namespace {

constexpr std::string_view kPrefix = "cpe:2.3:";

// Splits on colons that are not escaped with a backslash.
std::optional<std::vector<std::string>> SplitUnescaped(std::string_view s) {
  std::vector<std::string> out(1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      if (i + 1 >= s.size()) return std::nullopt;
      out.back() += c;
      out.back() += s[++i];
    } else if (c == ':') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

bool IsPlainChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         c == '-' || c == '.';
}

// avstring: "*" | "-" | [*|?...] body [*|?...], where body chars are
// alphanumerics, '_', '-', '.', or a backslash-escaped printable character.
bool IsValidValue(std::string_view v) {
  if (v.empty()) return false;
  if (v == "*" || v == "-") return true;
  std::size_t begin = 0;
  std::size_t end = v.size();
  while (begin < end && (v[begin] == '?' || v[begin] == '*')) {
    if (v[begin] == '*' && begin > 0) return false;
    ++begin;
  }
  while (end > begin && (v[end - 1] == '?' || v[end - 1] == '*')) {
    // A trailing wildcard must not itself be escaped.
    if (end - 1 > begin && v[end - 2] == '\\') break;
    --end;
  }
  if (begin == end) return false;
  for (std::size_t i = begin; i < end; ++i) {
    char c = v[i];
    if (c == '\\') {
      if (i + 1 >= end) return false;
      unsigned char next = static_cast<unsigned char>(v[++i]);
      if (!std::isprint(next) || std::isalnum(next)) return false;
    } else if (!IsPlainChar(c)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::optional<Cpe23> Cpe23::parse(std::string_view text) {
  if (text.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  auto fields = SplitUnescaped(text.substr(kPrefix.size()));
  if (!fields || fields->size() != kAttributeCount) return std::nullopt;
  const std::string& part = (*fields)[kPart];
  if (part != "a" && part != "o" && part != "h" && part != "*" && part != "-")
    return std::nullopt;
  Cpe23 cpe;
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    if (!IsValidValue((*fields)[i])) return std::nullopt;
    cpe.attributes_[i] = std::move((*fields)[i]);
  }
  return cpe;
}

std::string Cpe23::str() const {
  std::string out(kPrefix);
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    if (i > 0) out += ':';
    out += attributes_[i];
  }
  return out;
}

}  // namespace vulnposture
