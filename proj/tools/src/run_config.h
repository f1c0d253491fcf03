// Copyright 2026 The Usersim Authors.
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


#ifndef USERSIM_TOOLS_RUN_CONFIG_H_
#define USERSIM_TOOLS_RUN_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/goal.h"
#include "usersim/harness.h"
#include "usersim/nus.h"
#include "usersim/trainer.h"

namespace usersim::app {

struct ConfigKey {
  std::string key;
  nlohmann::json default_value;
  std::string help;
};

// Every key a run configuration may hold, with its default.
const std::vector<ConfigKey>& ConfigKeys();
nlohmann::json DefaultConfig();

// "learning_rate" -> "--learning-rate".
std::string FlagName(std::string_view key);

// Converts flag text to the type of the key's default. Arrays take
// comma-separated items, objects take JSON text.
nlohmann::json ParseFlagValue(const ConfigKey& key, const std::string& text);

// Defaults, then the config file (when given), then flag overrides. Unknown
// keys and mistyped values throw kConfig.
nlohmann::json ResolveConfig(const std::string& config_path,
                             const std::map<std::string, std::string>& overrides);

// Hash over every key except the output location.
std::string ConfigHash(const nlohmann::json& config);
std::filesystem::path RunDir(const nlohmann::json& config);

// Resolves a data file key, falling back to the installed data directory.
std::string DataPath(const nlohmann::json& config, const std::string& key,
                     const std::string& default_name);

GoalSamplerConfig GoalConfigFrom(const nlohmann::json& config);
nn::TrainConfig TrainConfigFrom(const nlohmann::json& config);
NeuralSimulatorConfig SimulatorConfigFrom(const nlohmann::json& config);
PolicyTrainConfig PolicyConfigFrom(const nlohmann::json& config, uint64_t seed);

}  // namespace usersim::app

#endif  // USERSIM_TOOLS_RUN_CONFIG_H_
