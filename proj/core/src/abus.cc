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

#include "usersim/abus.h"

#include <algorithm>

#include "usersim/errors.h"

namespace usersim {

AgendaSimulator::AgendaSimulator(const Ontology& ontology, GoalSamplerConfig goal_config,
                                 AgendaConfig config)
    : ontology_(ontology), sampler_(ontology, std::move(goal_config)), config_(config) {}

void AgendaSimulator::Reset(Rng& rng) {
  const Goal goal = sampler_.Sample(rng);
  ResetWithGoal(goal, rng);
}

void AgendaSimulator::ResetWithGoal(const Goal& goal, Rng& rng) {
  goal_ = goal;
  goal_changed_ = false;
  turn_ = 0;
  accepted_venue_.reset();
  answered_.clear();
  agenda_.clear();
  agenda_.push_back(UserAct::Make(UserActType::kBye));
  for (auto it = goal_.requests.rbegin(); it != goal_.requests.rend(); ++it) {
    agenda_.push_back(UserAct::Request(*it));
  }
  std::vector<UserAct> informs;
  for (const auto& [slot, value] : goal_.constraints) informs.push_back(UserAct::Inform(slot, value));
  for (size_t i = informs.size(); i > 1; --i) std::swap(informs[i - 1], informs[rng.UniformIndex(i)]);
  for (UserAct& act : informs) agenda_.push_back(std::move(act));
  ready_ = true;
}

void AgendaSimulator::Remove(const UserAct& act) {
  agenda_.erase(std::remove(agenda_.begin() + 1, agenda_.end(), act), agenda_.end());
}

void AgendaSimulator::Push(UserAct act) {
  if (act.type == UserActType::kInform) {
    const std::string& slot = act.payload.front().slot;
    agenda_.erase(std::remove_if(agenda_.begin() + 1, agenda_.end(),
                                 [&](const UserAct& a) {
                                   return a.type == UserActType::kInform &&
                                          a.payload.front().slot == slot;
                                 }),
                  agenda_.end());
  } else {
    Remove(act);
  }
  agenda_.push_back(std::move(act));
}

void AgendaSimulator::InformSlot(const std::string& slot) {
  auto it = goal_.constraints.find(slot);
  Push(UserAct::Inform(slot, it == goal_.constraints.end() ? std::string(kDontCare) : it->second));
}

void AgendaSimulator::HandleVenue(const SystemAct& act) {
  const auto name = act.Find("name");
  if (name && !name->empty() && name != accepted_venue_) {
    const Venue* venue = ontology_.FindVenue(*name);
    if (venue != nullptr && Ontology::Matches(*venue, goal_.constraints)) {
      accepted_venue_ = *name;
      answered_ = {"name"};
      Remove(UserAct::Request("name"));
      Remove(UserAct::Make(UserActType::kReqAlts));
    } else {
      accepted_venue_.reset();
      answered_.clear();
      Push(UserAct::Make(UserActType::kReqAlts));
      return;
    }
  }
  if (!accepted_venue_) return;
  for (const SlotValue& sv : act.payload) {
    if (!ontology_.IsRequestable(sv.slot)) continue;
    answered_.insert(sv.slot);
    Remove(UserAct::Request(sv.slot));
  }
}

UserOutput AgendaSimulator::Respond(std::span<const SystemAct> acts, Rng& rng) {
  if (!ready_) throw Error(ErrorCode::kInvalidState, "agenda simulator used before reset");
  goal_changed_ = false;
  for (const SystemAct& act : acts) {
    switch (act.type) {
      case SystemActType::kRequest:
      case SystemActType::kSelect:
        for (const SlotValue& sv : act.payload) {
          if (ontology_.IsInformable(sv.slot)) {
            InformSlot(sv.slot);
            break;
          }
        }
        break;
      case SystemActType::kExplConf:
      case SystemActType::kImplConf:
        for (const SlotValue& sv : act.payload) {
          if (!ontology_.IsInformable(sv.slot)) continue;
          auto it = goal_.constraints.find(sv.slot);
          const std::string& wanted =
              it == goal_.constraints.end() ? std::string(kDontCare) : it->second;
          if (sv.value == wanted) {
            if (act.type == SystemActType::kExplConf) Push(UserAct::Make(UserActType::kAffirm));
          } else {
            InformSlot(sv.slot);
            Push(UserAct::Make(UserActType::kNegate));
          }
        }
        break;
      case SystemActType::kOffer:
      case SystemActType::kInform:
        HandleVenue(act);
        break;
      case SystemActType::kCantHelp: {
        GoalUpdate update = ApplyCantHelp(goal_, act, rng, ontology_, turn_);
        goal_ = std::move(update.goal);
        accepted_venue_.reset();
        answered_.clear();
        if (update.changed_slot) {
          goal_changed_ = true;
          InformSlot(*update.changed_slot);
        } else {
          const auto& [slot, value] = *std::next(
              goal_.constraints.begin(),
              static_cast<long>(rng.UniformIndex(goal_.constraints.size())));
          Push(UserAct::Inform(slot, value));
        }
        break;
      }
      default:
        break;
    }
  }
  ++turn_;
  return UserOutput::Acts(PopActs(rng));
}

std::vector<UserAct> AgendaSimulator::PopActs(Rng& rng) {
  if (agenda_.size() == 1) {
    // Only bye is left: make sure the goal is complete before leaving.
    if (!accepted_venue_) {
      const auto& [slot, value] = *std::next(
          goal_.constraints.begin(), static_cast<long>(rng.UniformIndex(goal_.constraints.size())));
      Push(UserAct::Inform(slot, value));
    } else {
      for (auto it = goal_.requests.rbegin(); it != goal_.requests.rend(); ++it) {
        if (!answered_.count(*it)) Push(UserAct::Request(*it));
      }
    }
  }
  const size_t wanted = rng.Bernoulli(config_.pop_two_prob) ? 2 : 1;
  std::vector<UserAct> out;
  while (out.size() < wanted && !agenda_.empty()) {
    const bool is_bye = agenda_.back().type == UserActType::kBye;
    if (is_bye && !out.empty()) break;
    out.push_back(agenda_.back());
    if (is_bye) break;
    agenda_.pop_back();
  }
  return out;
}

}  // namespace usersim
