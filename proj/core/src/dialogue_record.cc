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

#include "usersim/dialogue_record.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "usersim/errors.h"

namespace usersim {

using nlohmann::json;

namespace {

json ActsToJson(std::span<const SystemAct> acts) {
  json out = json::array();
  for (const SystemAct& a : acts) out.push_back(a.ToString());
  return out;
}

json ActsToJson(std::span<const UserAct> acts) {
  json out = json::array();
  for (const UserAct& a : acts) out.push_back(a.ToString());
  return out;
}

}  // namespace

double DialogueRecord::TotalReward() const {
  double total = 0.0;
  for (const TurnRecord& t : turns) total += t.reward;
  return total;
}

std::vector<double> ComputeRewards(size_t num_turns, bool success) {
  std::vector<double> rewards(num_turns, -kTurnPenalty);
  if (success && num_turns > 0) rewards.back() += kSuccessReward;
  return rewards;
}

void FinalizeRecord(DialogueRecord& record, bool success) {
  record.success = success;
  const std::vector<double> rewards = ComputeRewards(record.turns.size(), success);
  for (size_t i = 0; i < rewards.size(); ++i) record.turns[i].reward = rewards[i];
  record.complete = true;
}

void CheckRecordInvariants(const DialogueRecord& record) {
  if (record.turns.empty()) throw Error(ErrorCode::kInvalidState, "record has no turns");
  if (static_cast<int>(record.turns.size()) > kMaxDialogueTurns) {
    throw Error(ErrorCode::kInvalidState,
                "record exceeds turn cap: " + std::to_string(record.turns.size()));
  }
  const double expected =
      (record.success ? kSuccessReward : 0.0) - kTurnPenalty * static_cast<double>(record.turns.size());
  if (std::abs(record.TotalReward() - expected) > 1e-9) {
    throw Error(ErrorCode::kInvalidState, "reward identity violated");
  }
}

json RecordToJson(const DialogueRecord& record) {
  json turns = json::array();
  for (const TurnRecord& t : record.turns) {
    json jt = {{"system_acts", ActsToJson(t.system_acts)},
               {"system_text", t.system_text},
               {"decoded", ActsToJson(t.decoded)},
               {"reward", t.reward},
               {"goal_changed", t.goal_changed}};
    if (t.user.text) jt["user_text"] = *t.user.text;
    if (t.user.acts) jt["user_acts"] = ActsToJson(*t.user.acts);
    if (t.decision) {
      jt["decision"] = {{"state", t.decision->summary_state},
                        {"action", t.decision->master_action}};
    }
    turns.push_back(std::move(jt));
  }
  return {{"seed", record.seed},
          {"simulator", record.simulator},
          {"initial_goal", GoalToJson(record.initial_goal)},
          {"final_goal", GoalToJson(record.final_goal)},
          {"turns", turns},
          {"success", record.success},
          {"complete", record.complete},
          {"total_reward", record.TotalReward()}};
}

DialogueRecord RecordFromJson(const json& j) {
  DialogueRecord record;
  record.seed = j.at("seed").get<uint64_t>();
  record.simulator = j.at("simulator").get<std::string>();
  record.initial_goal = GoalFromJson(j.at("initial_goal"));
  record.final_goal = GoalFromJson(j.at("final_goal"));
  record.success = j.at("success").get<bool>();
  record.complete = j.at("complete").get<bool>();
  for (const json& jt : j.at("turns")) {
    TurnRecord t;
    for (const json& a : jt.at("system_acts")) t.system_acts.push_back(ParseSystemAct(a.get<std::string>()));
    t.system_text = jt.at("system_text").get<std::string>();
    for (const json& a : jt.at("decoded")) t.decoded.push_back(ParseUserAct(a.get<std::string>()));
    t.reward = jt.at("reward").get<double>();
    t.goal_changed = jt.value("goal_changed", false);
    if (jt.contains("user_text")) t.user.text = jt.at("user_text").get<std::string>();
    if (jt.contains("user_acts")) {
      std::vector<UserAct> acts;
      for (const json& a : jt.at("user_acts")) acts.push_back(ParseUserAct(a.get<std::string>()));
      t.user.acts = std::move(acts);
    }
    if (jt.contains("decision")) {
      t.decision = Decision{jt["decision"].at("state").get<int>(), jt["decision"].at("action").get<int>()};
    }
    record.turns.push_back(std::move(t));
  }
  return record;
}

}  // namespace usersim
