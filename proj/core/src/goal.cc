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

#include "usersim/goal.h"

#include <algorithm>
#include <set>

#include <glog/logging.h>
#include <nlohmann/json.hpp>

#include "usersim/dialogue_record.h"
#include "usersim/errors.h"

namespace usersim {

using nlohmann::json;

bool Goal::HasRequest(std::string_view slot) const {
  return std::find(requests.begin(), requests.end(), slot) != requests.end();
}

json GoalToJson(const Goal& goal) {
  json history = json::array();
  for (const GoalChange& c : goal.history) {
    history.push_back({{"turn", c.turn}, {"previous", c.previous}});
  }
  return {{"constraints", goal.constraints}, {"requests", goal.requests}, {"history", history}};
}

Goal GoalFromJson(const json& j) {
  Goal goal;
  goal.constraints = j.at("constraints").get<Constraints>();
  goal.requests = j.at("requests").get<std::vector<std::string>>();
  if (j.contains("history")) {
    for (const json& c : j.at("history")) {
      goal.history.push_back({c.at("turn").get<int>(), c.at("previous").get<Constraints>()});
    }
  }
  return goal;
}

std::string DescribeGoal(const Goal& goal) {
  std::string out = "constraints(";
  bool first = true;
  for (const auto& [slot, value] : goal.constraints) {
    if (!first) out += ',';
    out += slot + "=" + value;
    first = false;
  }
  out += ") requests(";
  for (size_t i = 0; i < goal.requests.size(); ++i) {
    if (i > 0) out += ',';
    out += goal.requests[i];
  }
  return out + ")";
}

json GoalSamplerConfig::ToJson() const {
  return {{"constraint_probs", constraint_probs},
          {"default_constraint_prob", default_constraint_prob},
          {"request_probs", request_probs},
          {"default_request_prob", default_request_prob},
          {"achievable_only", achievable_only}};
}

GoalSamplerConfig GoalSamplerConfig::FromJson(const json& j) {
  GoalSamplerConfig c;
  if (j.contains("constraint_probs")) c.constraint_probs = j.at("constraint_probs");
  if (j.contains("default_constraint_prob")) c.default_constraint_prob = j.at("default_constraint_prob");
  if (j.contains("request_probs")) c.request_probs = j.at("request_probs");
  if (j.contains("default_request_prob")) c.default_request_prob = j.at("default_request_prob");
  if (j.contains("achievable_only")) c.achievable_only = j.at("achievable_only");
  return c;
}

GoalSampler::GoalSampler(const Ontology& ontology, GoalSamplerConfig config)
    : ontology_(ontology), config_(std::move(config)) {
  if (ontology_.informable().empty()) {
    throw Error(ErrorCode::kInvalidState, "ontology has no informable slots");
  }
  if (ontology_.requestable().empty()) {
    throw Error(ErrorCode::kInvalidState, "ontology has no requestable slots");
  }
  bool any_constraint = false, any_request = false;
  for (const auto& s : ontology_.informable()) any_constraint |= ConstraintProb(s.name) > 0.0;
  for (const auto& r : ontology_.requestable()) any_request |= RequestProb(r) > 0.0;
  if (!any_constraint || !any_request) {
    throw Error(ErrorCode::kConfig, "goal sampler probabilities admit no goal");
  }
}

double GoalSampler::ConstraintProb(std::string_view slot) const {
  auto it = config_.constraint_probs.find(std::string(slot));
  return it == config_.constraint_probs.end() ? config_.default_constraint_prob : it->second;
}

double GoalSampler::RequestProb(std::string_view slot) const {
  auto it = config_.request_probs.find(std::string(slot));
  return it == config_.request_probs.end() ? config_.default_request_prob : it->second;
}

std::vector<bool> GoalSampler::DrawConstraintPresence(Rng& rng) const {
  std::vector<bool> present;
  present.reserve(ontology_.informable().size());
  for (const InformableSlot& s : ontology_.informable()) {
    present.push_back(rng.Bernoulli(ConstraintProb(s.name)));
  }
  return present;
}

Goal GoalSampler::SampleOnce(Rng& rng) const {
  std::vector<bool> present;
  do {
    present = DrawConstraintPresence(rng);
  } while (std::none_of(present.begin(), present.end(), [](bool b) { return b; }));

  Goal goal;
  const auto& slots = ontology_.informable();
  for (size_t i = 0; i < slots.size(); ++i) {
    if (!present[i]) continue;
    goal.constraints[slots[i].name] = slots[i].values[rng.UniformIndex(slots[i].values.size())];
  }
  while (goal.requests.empty()) {
    for (const std::string& r : ontology_.requestable()) {
      if (rng.Bernoulli(RequestProb(r))) goal.requests.push_back(r);
    }
  }
  return goal;
}

Goal GoalSampler::Sample(Rng& rng) const {
  if (!config_.achievable_only) return SampleOnce(rng);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Goal goal = SampleOnce(rng);
    if (ontology_.CountVenues(goal.constraints) > 0) return goal;
  }
  throw Error(ErrorCode::kInvalidState, "no achievable goal found");
}

GoalUpdate ApplyCantHelp(const Goal& goal, const SystemAct& canthelp, Rng& rng,
                         const Ontology& ontology, int turn) {
  GoalUpdate update{goal, std::nullopt, ""};
  const std::string* offending = nullptr;
  for (const InformableSlot& slot : ontology.informable()) {
    if (canthelp.Find(slot.name) && goal.constraints.count(slot.name)) {
      offending = &slot.name;
      break;
    }
  }
  if (offending == nullptr) {
    update.warning = "canthelp names no constrained slot: " + canthelp.ToString();
    LOG(WARNING) << update.warning;
    return update;
  }
  const std::string& current = goal.constraints.at(*offending);
  std::vector<std::string> alternatives;
  for (const std::string& v : ontology.Slot(*offending).values) {
    if (v != current) alternatives.push_back(v);
  }
  if (alternatives.empty()) {
    update.warning = "slot " + *offending + " has no alternative value";
    LOG(WARNING) << update.warning;
    return update;
  }
  update.goal.history.push_back({turn, goal.constraints});
  update.goal.constraints[*offending] = alternatives[rng.UniformIndex(alternatives.size())];
  update.changed_slot = *offending;
  return update;
}

bool GoalSatisfied(const Goal& goal, const DialogueRecord& record, const Ontology& ontology) {
  // Requestable slots informed for each venue during its tenure.
  std::map<std::string, std::set<std::string>> informed;
  std::string current;
  for (const TurnRecord& turn : record.turns) {
    for (const SystemAct& act : turn.system_acts) {
      if (act.type != SystemActType::kOffer && act.type != SystemActType::kInform) continue;
      if (auto name = act.Find("name"); name && !name->empty()) {
        current = *name;
        informed[current].insert("name");
      }
      if (current.empty()) continue;
      for (const SlotValue& sv : act.payload) {
        if (ontology.IsRequestable(sv.slot)) informed[current].insert(sv.slot);
      }
    }
  }
  for (const auto& [name, slots] : informed) {
    const Venue* venue = ontology.FindVenue(name);
    if (venue == nullptr || !Ontology::Matches(*venue, goal.constraints)) continue;
    const bool all = std::all_of(goal.requests.begin(), goal.requests.end(),
                                 [&](const std::string& r) { return slots.count(r) > 0; });
    if (all) return true;
  }
  return false;
}

}  // namespace usersim
