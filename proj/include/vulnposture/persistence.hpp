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

#ifndef VULNPOSTURE_PERSISTENCE_HPP_
#define VULNPOSTURE_PERSISTENCE_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vulnposture/model.hpp"
#include "vulnposture/validate.hpp"

namespace vulnposture {

inline constexpr std::string_view kModelFileExtension = ".posture.json";

// Canonical document: sorted keys, entity lists sorted by id, id arrays
// sorted, two-space indentation, trailing newline. Equal models produce
// identical bytes.
nlohmann::json model_to_json(const DesignModel& model);
std::string serialize_model(const DesignModel& model);

struct LoadedModel {
  DesignModel model;
  // Duplicate ids found in the document plus validate_model findings.
  ValidationReport findings;
};

// Parses and migrates a document, then validates it. Throws `parse-failure`
// (with line and column when the text is not JSON) or `schema-too-new`.
// Validation errors are returned, not thrown.
LoadedModel parse_model(std::string_view text);
LoadedModel read_model(const std::filesystem::path& path);

struct LoadOptions {
  // Accept a model with validation errors.
  bool force = false;
};

// read_model, then throws `invalid-model` on validation errors unless forced.
DesignModel load_model(const std::filesystem::path& path, LoadOptions options = {});

// Writes the canonical form through a temporary file renamed into place.
void save_model(const DesignModel& model, const std::filesystem::path& path);

// Writes `contents` to `path` atomically (temporary sibling + rename).
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace vulnposture

#endif  // VULNPOSTURE_PERSISTENCE_HPP_
