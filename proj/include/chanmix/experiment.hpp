// Copyright 2026 The chanmix Authors
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

// Experiment configuration, dispatch and result records for the CLI.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "chanmix/qops.hpp"

namespace chanmix {

using json = nlohmann::json;

/// A validated configuration: `kind` plus every field of that kind's schema,
/// with defaults filled in. Unknown keys are rejected.
class ExperimentConfig {
 public:
  const std::string& kind() const noexcept { return kind_; }
  const json& values() const noexcept { return values_; }

  double number(const std::string& key) const;
  std::uint64_t uint(const std::string& key) const;
  std::string string(const std::string& key) const;
  bool has(const std::string& key) const;

  /// Canonical JSON form: {"kind": ..., <fields>}. parse_config(to_json())
  /// reproduces the same config.
  json to_json() const;

  friend ExperimentConfig parse_config(const json& j);

 private:
  std::string kind_;
  json values_;
};

/// Validates a JSON config (or a flag set collected into JSON).
ExperimentConfig parse_config(const json& j);
ExperimentConfig parse_config_file(const std::string& path);

struct ResultRecord {
  json config;
  json outputs;
  json versions;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;
  std::string csv;  // optional time series / resource rows; not part of the JSON

  json to_json() const;
  static ResultRecord from_json(const json& j);
};

ResultRecord run_experiment(const ExperimentConfig& config);

/// Writes via a temporary file in the same directory and renames it into
/// place, so readers never observe partial output.
void write_atomically(const std::string& path, const std::string& contents);

/// Gate by name: i, x, y, z, h, s, t, cx, cz, swap, rx(a), ry(a), rz(a).
Operator named_gate(const std::string& name);

}  // namespace chanmix
