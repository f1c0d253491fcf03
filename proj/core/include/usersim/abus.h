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

#ifndef USERSIM_ABUS_H_
#define USERSIM_ABUS_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "usersim/goal.h"
#include "usersim/ontology.h"
#include "usersim/user_simulator.h"

namespace usersim {

struct AgendaConfig {
  // Chance of saying two acts in one turn.
  double pop_two_prob = 0.3;
};

// Agenda-based simulator. The agenda is a stack of pending user acts with
// bye at the bottom; system acts push answers onto it and each turn pops one
// or two acts from the top.
class AgendaSimulator : public UserSimulator {
 public:
  AgendaSimulator(const Ontology& ontology, GoalSamplerConfig goal_config = {},
                  AgendaConfig config = {});

  void Reset(Rng& rng) override;
  void ResetWithGoal(const Goal& goal, Rng& rng) override;
  UserOutput Respond(std::span<const SystemAct> acts, Rng& rng) override;

  const Goal& goal() const override { return goal_; }
  bool goal_changed() const override { return goal_changed_; }
  std::string_view name() const override { return "abus"; }

  // Bottom first; back() is the next act to say.
  const std::vector<UserAct>& agenda() const { return agenda_; }
  const std::optional<std::string>& accepted_venue() const { return accepted_venue_; }

 private:
  void Push(UserAct act);
  void Remove(const UserAct& act);
  void InformSlot(const std::string& slot);
  void HandleVenue(const SystemAct& act);
  std::vector<UserAct> PopActs(Rng& rng);

  const Ontology& ontology_;
  GoalSampler sampler_;
  AgendaConfig config_;
  bool ready_ = false;
  int turn_ = 0;
  Goal goal_;
  bool goal_changed_ = false;
  std::vector<UserAct> agenda_;
  std::optional<std::string> accepted_venue_;
  std::set<std::string> answered_;
};

}  // namespace usersim

#endif  // USERSIM_ABUS_H_
