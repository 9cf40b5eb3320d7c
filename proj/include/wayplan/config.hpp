// Copyright 2026 The Wayplan Authors
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

#ifndef WAYPLAN_CONFIG_HPP_
#define WAYPLAN_CONFIG_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wayplan/datagen.hpp"
#include "wayplan/milp.hpp"
#include "wayplan/nl_bridge.hpp"
#include "wayplan/solver.hpp"

namespace wayplan {

struct ServiceSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string dataset;      // JSON-lines corpus whose inventories are pooled
  std::string inventory = "dataset";  // or "generated": planted per request
  std::string session_log;  // JSON-lines event log; empty keeps sessions in memory
  bool parallel_modes = false;
  int threads = 4;
};

// Settings shared by every subcommand. Defaults, then the config file, then
// WAYPLAN_* environment variables, then command-line flags.
struct Config {
  std::uint64_t seed = 0;
  ModelParams model;
  SolverConfig solver;
  std::string translator = "template";  // or "endpoint:URL"
  ExternalEndpoint endpoint;
  GenParams gen;
  ServiceSettings service;
};

// Dotted keys accepted by SetConfigValue, e.g. "solver.time_limit_ms".
const std::vector<std::string>& ConfigKeys();

// Throws InvalidConfig naming the key.
void SetConfigValue(Config& config, std::string_view key, std::string_view value);

// "key = value" lines; "[section]" prefixes later keys with "section.";
// '#' starts a comment; values may be double-quoted.
void LoadConfigText(Config& config, std::string_view text, std::string_view origin = "config");
void LoadConfigFile(Config& config, const std::string& path);

// Key "solver.time_limit_ms" reads WAYPLAN_SOLVER_TIME_LIMIT_MS.
using EnvLookup = std::function<const char*(const char*)>;
void ApplyEnvironment(Config& config, const EnvLookup& lookup);
std::string EnvVarName(std::string_view key);

// Throws InvalidConfig with the offending key as path.
void ValidateConfig(const Config& config);

TranslatorBackend BackendOf(const Config& config);

nlohmann::ordered_json ConfigToJson(const Config& config);

}  // namespace wayplan

#endif  // WAYPLAN_CONFIG_HPP_
