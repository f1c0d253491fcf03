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

#ifndef USERSIM_GOAL_H_
#define USERSIM_GOAL_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "usersim/dialogue_acts.h"
#include "usersim/ontology.h"
#include "usersim/rng.h"

namespace usersim {

struct DialogueRecord;

struct GoalChange {
  int turn = 0;
  Constraints previous;

  bool operator==(const GoalChange&) const = default;
};

// User goal: constraints over informable slots plus requested slots. The
// request set is fixed at creation; only constraints change, and every
// change is recorded in `history`.
struct Goal {
  Constraints constraints;
  std::vector<std::string> requests;  // ontology order
  std::vector<GoalChange> history;

  bool HasRequest(std::string_view slot) const;
  bool operator==(const Goal&) const = default;
};

nlohmann::json GoalToJson(const Goal& goal);
Goal GoalFromJson(const nlohmann::json& j);
std::string DescribeGoal(const Goal& goal);

struct GoalSamplerConfig {
  // Presence probability per informable slot; unlisted slots use
  // default_constraint_prob.
  std::map<std::string, double> constraint_probs = {
      {"food", 0.66}, {"area", 0.62}, {"pricerange", 0.58}};
  double default_constraint_prob = 0.5;
  // Presence probability per requestable slot; unlisted slots use
  // default_request_prob.
  std::map<std::string, double> request_probs;
  double default_request_prob = 0.4;
  // Resample until at least one venue matches the constraints.
  bool achievable_only = false;

  nlohmann::json ToJson() const;
  static GoalSamplerConfig FromJson(const nlohmann::json& j);
};

class GoalSampler {
 public:
  GoalSampler(const Ontology& ontology, GoalSamplerConfig config = {});

  // Draw order: constraint presence per slot in ontology order (repeated
  // until non-empty), then one value per present slot in ontology order,
  // then request presence per requestable slot (repeated until non-empty).
  Goal Sample(Rng& rng) const;

  // One pre-rejection presence draw, in ontology slot order.
  std::vector<bool> DrawConstraintPresence(Rng& rng) const;

  double ConstraintProb(std::string_view slot) const;
  double RequestProb(std::string_view slot) const;
  const GoalSamplerConfig& config() const { return config_; }

 private:
  Goal SampleOnce(Rng& rng) const;

  const Ontology& ontology_;
  GoalSamplerConfig config_;
};

struct GoalUpdate {
  Goal goal;
  std::optional<std::string> changed_slot;  // empty when the goal is unchanged
  std::string warning;
};

// Reacts to a canthelp act: the first slot named by the act (in ontology
// order) that is currently constrained gets a new value drawn uniformly from
// the slot's other values. Unchanged goal plus a warning when no named slot is
// constrained or the slot has no alternative value.
GoalUpdate ApplyCantHelp(const Goal& goal, const SystemAct& canthelp, Rng& rng,
                         const Ontology& ontology, int turn);

// True iff some venue offered during the dialogue matches every final
// constraint and every requested slot was informed for that venue while it
// was the venue under discussion.
bool GoalSatisfied(const Goal& goal, const DialogueRecord& record, const Ontology& ontology);

}  // namespace usersim

#endif  // USERSIM_GOAL_H_
