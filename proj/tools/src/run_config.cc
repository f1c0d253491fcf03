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


#include "run_config.h"

#include <cstdio>
#include <sstream>

#include "usersim/checkpoint.h"
#include "usersim/errors.h"

#ifndef USERSIM_DEFAULT_DATA_DIR
#define USERSIM_DEFAULT_DATA_DIR "data"
#endif

namespace usersim::app {

using nlohmann::json;

const std::vector<ConfigKey>& ConfigKeys() {
  static const std::vector<ConfigKey> keys = {
      {"seed", 1, "root random seed"},
      {"out_dir", "runs", "directory holding run-<hash> folders"},
      {"ontology", "", "ontology JSON (default: bundled toy ontology)"},
      {"decoder_rules", "", "semantic decoder rules (default: bundled rules)"},
      {"corrections", "", "ASR correction map (default: bundled map)"},
      {"corpus", "", "corpus JSON; synthesized when empty"},
      {"dstc2_root", "", "DSTC2 data root for prepare-data"},
      {"dstc2_file_list", "", "optional DSTC2 file list relative to the data root"},
      {"n_synth_dialogues", 2000, "dialogues in a synthesized corpus"},
      {"train_fraction", 0.75, "fraction of corpus dialogues used for training"},
      {"max_turn_tokens", 22, "longest kept user turn in tokens, counting <EOS>"},
      {"hidden", 100, "LSTM width"},
      {"bridge", 100, "encoder-decoder bridge width"},
      {"learning_rate", 1e-3, "Adam learning rate"},
      {"batch_size", 32, "training batch size"},
      {"epochs", 12, "training epochs"},
      {"init_scale", 0.08, "uniform initialization range"},
      {"model", "", "trained user model checkpoint"},
      {"n_beams", 2, "beams for sampled beam search"},
      {"max_decode_len", 30, "longest generated utterance"},
      {"max_regenerations", 10, "regenerations allowed after a goal change"},
      {"simulator", "abus", "user simulator for train-policy: abus or nus"},
      {"learner", "kernel-sarsa", "kernel-sarsa or sarsa-lambda"},
      {"n_train_dialogues", 4000, "policy training dialogues"},
      {"short_train_dialogues", 1000, "second, shorter policy training length; 0 disables"},
      {"n_test_dialogues", 1000, "test dialogues per policy and simulator"},
      {"n_policy_seeds", 5, "policies trained per simulator"},
      {"explore_start", 0.3, "initial exploration rate"},
      {"explore_end", 0.0, "final exploration rate"},
      {"pop_two_prob", 0.3, "agenda simulator chance of two acts per turn"},
      {"constraint_probs", json::object(), "per-slot constraint probabilities (JSON object)"},
      {"request_prob", 0.4, "probability of each request slot"},
      {"achievable_goals", true, "serve: only sample goals some venue satisfies"},
      {"policy", "", "policy checkpoint for chat"},
      {"policies", json::array(), "policy checkpoints for serve (comma-separated)"},
      {"host", "127.0.0.1", "serve: bind address"},
      {"port", 8080, "serve: port"},
      {"session_log", "", "serve: JSONL session log (default: <run dir>/sessions.jsonl)"},
      {"static_dir", "", "serve: static files mounted at /"},
  };
  return keys;
}

json DefaultConfig() {
  json config = json::object();
  for (const ConfigKey& k : ConfigKeys()) config[k.key] = k.default_value;
  return config;
}

std::string FlagName(std::string_view key) {
  std::string flag = "--";
  for (char c : key) flag += c == '_' ? '-' : c;
  return flag;
}

namespace {

const ConfigKey& FindKey(const std::string& key) {
  for (const ConfigKey& k : ConfigKeys()) {
    if (k.key == key) return k;
  }
  throw Error(ErrorCode::kConfig, "unknown config key: " + key);
}

bool SameKind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return !a.is_number_integer() || b.is_number_integer();
  return a.type() == b.type();
}

}  // namespace

json ParseFlagValue(const ConfigKey& key, const std::string& text) {
  const json& def = key.default_value;
  try {
    size_t used = 0;
    if (def.is_boolean()) {
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
    } else if (def.is_number_integer()) {
      const long long v = std::stoll(text, &used);
      if (used == text.size()) return v;
    } else if (def.is_number()) {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else if (def.is_string()) {
      return text;
    } else if (def.is_array()) {
      json items = json::array();
      std::stringstream in(text);
      std::string item;
      while (std::getline(in, item, ',')) {
        if (!item.empty()) items.push_back(item);
      }
      return items;
    } else if (def.is_object()) {
      json v = json::parse(text);
      if (v.is_object()) return v;
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kConfig, "bad value for " + FlagName(key.key) + ": " + text);
}

json ResolveConfig(const std::string& config_path,
                   const std::map<std::string, std::string>& overrides) {
  json config = DefaultConfig();
  if (!config_path.empty()) {
    json doc;
    try {
      doc = ReadJsonFile(config_path);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, std::string("cannot read config: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      const ConfigKey& k = FindKey(key);
      if (!SameKind(k.default_value, value)) {
        throw Error(ErrorCode::kConfig, "config key " + key + " has the wrong type");
      }
      config[key] = value;
    }
  }
  for (const auto& [key, text] : overrides) config[key] = ParseFlagValue(FindKey(key), text);
  return config;
}

std::string ConfigHash(const json& config) {
  json hashed = config;
  hashed.erase("out_dir");
  const std::string text = hashed.dump();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::filesystem::path RunDir(const json& config) {
  return std::filesystem::path(config.at("out_dir").get<std::string>()) /
         ("run-" + ConfigHash(config));
}

std::string DataPath(const json& config, const std::string& key,
                     const std::string& default_name) {
  const std::string value = config.value(key, std::string());
  if (!value.empty()) return value;
  if (const char* env = std::getenv("USERSIM_DATA_DIR")) {
    return (std::filesystem::path(env) / default_name).string();
  }
  return (std::filesystem::path(USERSIM_DEFAULT_DATA_DIR) / default_name).string();
}

GoalSamplerConfig GoalConfigFrom(const json& config) {
  GoalSamplerConfig goals;
  for (const auto& [slot, p] : config.at("constraint_probs").items()) {
    if (!p.is_number()) throw Error(ErrorCode::kConfig, "constraint_probs values must be numbers");
    goals.constraint_probs[slot] = p.get<double>();
  }
  goals.default_request_prob = config.at("request_prob").get<double>();
  return goals;
}

nn::TrainConfig TrainConfigFrom(const json& config) {
  nn::TrainConfig train;
  train.hidden = config.at("hidden").get<int>();
  train.bridge = config.at("bridge").get<int>();
  train.learning_rate = config.at("learning_rate").get<double>();
  train.batch_size = config.at("batch_size").get<int>();
  train.epochs = config.at("epochs").get<int>();
  train.init_scale = config.at("init_scale").get<double>();
  train.seed = config.at("seed").get<uint64_t>();
  return train;
}

NeuralSimulatorConfig SimulatorConfigFrom(const json& config) {
  NeuralSimulatorConfig sim;
  sim.n_beams = config.at("n_beams").get<int>();
  sim.max_len = config.at("max_decode_len").get<int>();
  sim.max_regenerations = config.at("max_regenerations").get<int>();
  return sim;
}

PolicyTrainConfig PolicyConfigFrom(const json& config, uint64_t seed) {
  PolicyTrainConfig policy;
  policy.learner = config.at("learner").get<std::string>();
  policy.n_dialogues = config.at("n_train_dialogues").get<int>();
  policy.explore_start = config.at("explore_start").get<double>();
  policy.explore_end = config.at("explore_end").get<double>();
  policy.seed = seed;
  return policy;
}

}  // namespace usersim::app
