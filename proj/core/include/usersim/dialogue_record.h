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

#ifndef USERSIM_DIALOGUE_RECORD_H_
#define USERSIM_DIALOGUE_RECORD_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "usersim/dialogue_acts.h"
#include "usersim/goal.h"

namespace usersim {

inline constexpr double kSuccessReward = 20.0;
inline constexpr double kTurnPenalty = 1.0;
inline constexpr int kMaxDialogueTurns = 25;

// A simulator answers either in text (neural) or in acts (agenda-based).
struct UserOutput {
  std::optional<std::string> text;
  std::optional<std::vector<UserAct>> acts;

  static UserOutput Text(std::string t) { return {std::move(t), std::nullopt}; }
  static UserOutput Acts(std::vector<UserAct> a) { return {std::nullopt, std::move(a)}; }
  bool empty() const { return !text && !acts; }
};

// The learner's view of one system decision.
struct Decision {
  int summary_state = 0;
  int master_action = 0;
};

// One exchange: a system turn followed by the user's answer (absent when
// the system closed the dialogue).
struct TurnRecord {
  std::vector<SystemAct> system_acts;
  std::string system_text;
  UserOutput user;
  std::vector<UserAct> decoded;
  double reward = 0.0;
  std::optional<Decision> decision;
  bool goal_changed = false;
};

struct DialogueRecord {
  uint64_t seed = 0;
  std::string simulator;
  Goal initial_goal;
  Goal final_goal;
  std::vector<TurnRecord> turns;
  bool success = false;
  bool complete = false;

  double TotalReward() const;
  size_t num_turns() const { return turns.size(); }
};

// -1 per turn, +20 added to the last turn on success.
std::vector<double> ComputeRewards(size_t num_turns, bool success);

// Fills per-turn rewards and marks the record complete.
void FinalizeRecord(DialogueRecord& record, bool success);

// Throws kInvalidState when a record breaks the turn cap or the reward
// identity (total = 20 * success - turns).
void CheckRecordInvariants(const DialogueRecord& record);

nlohmann::json RecordToJson(const DialogueRecord& record);
DialogueRecord RecordFromJson(const nlohmann::json& j);

}  // namespace usersim

#endif  // USERSIM_DIALOGUE_RECORD_H_
