// Copyright 2026 The corrgraph Authors.
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

#include <optional>
#include <string>

#include "json.hpp"

#include "corrgraph/simulation.hpp"

namespace corrgraph {

inline constexpr const char* kRunConfigSchema = "corrgraph.simulate/1";

/// Simulation config plus output paths.
struct RunConfig {
  ExperimentConfig experiment;
  std::optional<std::string> histogram_output;
};

/// Unknown keys, wrong types and bad values throw ConfigError with the JSON
/// key path, e.g. "$.procedures[1].method".
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);

}  // namespace corrgraph
