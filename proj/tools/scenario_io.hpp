// Copyright 2026 The Rideshare Mechanisms Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rideshare/model.hpp"

namespace rideshare::io {

inline constexpr int kSchemaVersion = 1;

/// Malformed scenario input. `field()` is a JSON path such as
/// "commuters[0].trip.p_commit".
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parses a scenario document. Unknown fields, a wrong schema_version, and
/// any broken scenario invariant are rejected with ScenarioError.
Scenario parse_scenario(const nlohmann::json& document);
Scenario parse_scenario(std::string_view text);

/// Canonical document: keys sorted, reported types written only where they
/// differ from the true type.
nlohmann::json to_json(const Scenario& scenario);
std::string serialize(const Scenario& scenario);

/// Throws std::system_error if the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace rideshare::io
