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

#ifndef VULNPOSTURE_CPE_HPP_
#define VULNPOSTURE_CPE_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace vulnposture {

// A CPE 2.3 formatted-string binding:
//   cpe:2.3:part:vendor:product:version:update:edition:language:
//   sw_edition:target_sw:target_hw:other
//
// Attribute values are kept exactly as written (escapes included), so
// `Cpe23::parse(s)->str() == s` for every accepted `s`.
class Cpe23 {
 public:
  static constexpr std::size_t kAttributeCount = 11;
  enum Attribute : std::size_t {
    kPart = 0,
    kVendor,
    kProduct,
    kVersion,
    kUpdate,
    kEdition,
    kLanguage,
    kSwEdition,
    kTargetSw,
    kTargetHw,
    kOther,
  };

  // Returns nullopt when `text` is not a well-formed formatted string.
  static std::optional<Cpe23> parse(std::string_view text);

  const std::string& attribute(Attribute a) const { return attributes_[a]; }
  const std::string& part() const { return attributes_[kPart]; }
  const std::string& vendor() const { return attributes_[kVendor]; }
  const std::string& product() const { return attributes_[kProduct]; }
  const std::string& version() const { return attributes_[kVersion]; }

  std::string str() const;

  friend bool operator==(const Cpe23&, const Cpe23&) = default;

 private:
  std::array<std::string, kAttributeCount> attributes_;
};

}  // namespace vulnposture

#endif  // VULNPOSTURE_CPE_HPP_
