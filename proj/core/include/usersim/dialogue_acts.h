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

#ifndef USERSIM_DIALOGUE_ACTS_H_
#define USERSIM_DIALOGUE_ACTS_H_

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace usersim {

// Distinguished value accepted by every informable slot.
inline constexpr std::string_view kDontCare = "dontcare";

// Slot-value set over informable slots, keyed by slot name.
using Constraints = std::map<std::string, std::string>;

struct SlotValue {
  std::string slot;
  std::string value;  // empty for request/select

  auto operator<=>(const SlotValue&) const = default;
};

// Closed and ordered: the feature extractor encodes act types by position.
enum class SystemActType {
  kWelcomeMsg,
  kRequest,
  kSelect,
  kInform,
  kOffer,
  kExplConf,
  kImplConf,
  kCantHelp,
  kReqMore,
  kBye,
  kRepeat,
};
inline constexpr int kNumSystemActTypes = 11;

enum class UserActType {
  kInform,
  kRequest,
  kNegate,
  kAffirm,
  kReqAlts,
  kThankYou,
  kBye,
  kNull,
};
inline constexpr int kNumUserActTypes = 8;

std::string_view ActName(SystemActType type);
std::string_view ActName(UserActType type);
std::optional<SystemActType> ParseSystemActType(std::string_view name);
std::optional<UserActType> ParseUserActType(std::string_view name);

struct SystemAct {
  SystemActType type = SystemActType::kWelcomeMsg;
  std::vector<SlotValue> payload;

  static SystemAct Make(SystemActType type) { return {type, {}}; }
  static SystemAct Slot(SystemActType type, std::string slot) {
    return {type, {{std::move(slot), ""}}};
  }
  static SystemAct Pairs(SystemActType type, std::vector<SlotValue> pairs) {
    return {type, std::move(pairs)};
  }

  // Value for `slot` in the payload, if any.
  std::optional<std::string> Find(std::string_view slot) const;

  std::string ToString() const;
  auto operator<=>(const SystemAct&) const = default;
};

struct UserAct {
  UserActType type = UserActType::kNull;
  std::vector<SlotValue> payload;

  static UserAct Inform(std::string slot, std::string value) {
    return {UserActType::kInform, {{std::move(slot), std::move(value)}}};
  }
  static UserAct Request(std::string slot) {
    return {UserActType::kRequest, {{std::move(slot), ""}}};
  }
  static UserAct Make(UserActType type) { return {type, {}}; }

  std::string ToString() const;
  auto operator<=>(const UserAct&) const = default;
};

// Parses the compact act notation used in rule files, fixtures and logs:
// "inform(food=thai,area=north)", "request(phone)", "bye()" or "bye".
SystemAct ParseSystemAct(std::string_view text);
UserAct ParseUserAct(std::string_view text);

bool ContainsAct(std::span<const SystemAct> acts, SystemActType type);
bool ContainsAct(std::span<const UserAct> acts, UserActType type);

std::string JoinActs(std::span<const SystemAct> acts);
std::string JoinActs(std::span<const UserAct> acts);

}  // namespace usersim

#endif  // USERSIM_DIALOGUE_ACTS_H_
