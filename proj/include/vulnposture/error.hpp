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

#ifndef VULNPOSTURE_ERROR_HPP_
#define VULNPOSTURE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace vulnposture {

// Failure raised by library operations. `code()` is the stable, kebab-case
// identifier (e.g. "dangling-reference") surfaced by the CLI; `what()` is the
// human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* kDanglingReference = "dangling-reference";
inline constexpr const char* kWouldCreateCycle = "would-create-cycle";
inline constexpr const char* kDuplicateId = "duplicate-id";
inline constexpr const char* kMalformedId = "malformed-id";
inline constexpr const char* kUnknownComponent = "unknown-component";
inline constexpr const char* kUnknownVulnerability = "unknown-vulnerability";
inline constexpr const char* kUnknownComponentType = "unknown-component-type";
inline constexpr const char* kInvalidModel = "invalid-model";
inline constexpr const char* kNotApplicable = "not-applicable";
inline constexpr const char* kMalformedCatalog = "malformed-catalog";
inline constexpr const char* kUnknownView = "unknown-view";
inline constexpr const char* kRateLimited = "rate-limited";
inline constexpr const char* kTransportFailure = "transport-failure";
inline constexpr const char* kMalformedResponse = "malformed-response";
inline constexpr const char* kFixtureMissing = "fixture-missing";
inline constexpr const char* kIoFailure = "io-failure";
inline constexpr const char* kParseFailure = "parse-failure";
inline constexpr const char* kSchemaTooNew = "schema-too-new";
inline constexpr const char* kExists = "exists";
inline constexpr const char* kInvalidQuery = "invalid-query";
inline constexpr const char* kUsage = "usage";
}  // namespace errc

}  // namespace vulnposture

#endif  // VULNPOSTURE_ERROR_HPP_
