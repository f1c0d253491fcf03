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

#include "usersim/dialogue_manager.h"

#include <algorithm>

#include "usersim/errors.h"

namespace usersim {
namespace {

constexpr int kNumBuckets = 4;

SystemAct RequestAct(const std::string& slot) {
  return SystemAct::Slot(SystemActType::kRequest, slot);
}

}  // namespace

SummarySpace::SummarySpace(const Ontology& ontology)
    : ontology_(ontology), n_inf_(static_cast<int>(ontology.informable().size())) {
  num_states_ = (1 << n_inf_) * kNumBuckets * 2 * 2 * kNumUserActTypes;
}

std::string SummarySpace::ActionName(int action) const {
  if (action >= 0 && action < n_inf_) return "request_" + ontology_.informable()[action].name;
  if (action == offer_action()) return "offer";
  if (action == inform_action()) return "inform_requested";
  if (action == bye_action()) return "bye";
  throw Error(ErrorCode::kInvalidState, "no master action " + std::to_string(action));
}

int SummarySpace::CountBucket(size_t matches) {
  if (matches == 0) return 0;
  if (matches == 1) return 1;
  return matches < 5 ? 2 : 3;
}

int SummarySpace::LastActCode(std::span<const UserActType> acts) {
  static constexpr UserActType kPriority[] = {
      UserActType::kReqAlts, UserActType::kNegate,   UserActType::kRequest, UserActType::kInform,
      UserActType::kAffirm,  UserActType::kThankYou, UserActType::kBye};
  for (UserActType type : kPriority) {
    if (std::find(acts.begin(), acts.end(), type) != acts.end()) return static_cast<int>(type);
  }
  return static_cast<int>(UserActType::kNull);
}

int SummarySpace::Encode(const BeliefState& belief) const {
  int known = 0;
  for (int s = 0; s < n_inf_; ++s) {
    if (belief.slots.count(ontology_.informable()[s].name)) known |= 1 << s;
  }
  int index = known;
  index = index * kNumBuckets + CountBucket(MatchingVenues(belief, ontology_));
  index = index * 2 + (belief.outstanding.empty() ? 0 : 1);
  index = index * 2 + (OfferValid(belief, ontology_) ? 1 : 0);
  index = index * kNumUserActTypes + LastActCode(belief.last_user_acts);
  return index;
}

std::vector<bool> SummarySpace::Mask(const BeliefState& belief) const {
  std::vector<bool> mask(num_actions(), true);
  mask[inform_action()] = OfferValid(belief, ontology_) && !belief.outstanding.empty();
  return mask;
}

std::vector<SystemAct> OfferActs(const BeliefState& belief, const Ontology& ontology) {
  for (const Venue* venue : ontology.QueryVenues(belief.slots)) {
    if (belief.rejected.count(venue->name)) continue;
    std::vector<SlotValue> pairs;
    for (const InformableSlot& slot : ontology.informable()) {
      pairs.push_back({slot.name, venue->Get(slot.name)});
    }
    return {SystemAct::Pairs(SystemActType::kOffer, {{"name", venue->name}}),
            SystemAct::Pairs(SystemActType::kInform, std::move(pairs))};
  }
  std::vector<SlotValue> pairs;
  for (const InformableSlot& slot : ontology.informable()) {
    auto it = belief.slots.find(slot.name);
    if (it != belief.slots.end() && it->second != kDontCare) pairs.push_back({slot.name, it->second});
  }
  return {SystemAct::Pairs(SystemActType::kCantHelp, std::move(pairs))};
}

std::vector<SystemAct> SummarySpace::MapAction(int action, const BeliefState& belief) const {
  if (action >= 0 && action < n_inf_) return {RequestAct(ontology_.informable()[action].name)};
  if (action == offer_action()) return OfferActs(belief, ontology_);
  if (action == inform_action()) {
    if (!belief.offered) throw Error(ErrorCode::kInvalidState, "inform without an offered venue");
    const Venue* venue = ontology_.FindVenue(*belief.offered);
    if (venue == nullptr) throw Error(ErrorCode::kNotFound, *belief.offered);
    std::vector<SlotValue> pairs = {{"name", venue->name}};
    for (const std::string& slot : belief.outstanding) {
      if (slot != "name") pairs.push_back({slot, venue->Get(slot)});
    }
    return {SystemAct::Pairs(SystemActType::kInform, std::move(pairs))};
  }
  if (action == bye_action()) return {SystemAct::Make(SystemActType::kBye)};
  throw Error(ErrorCode::kInvalidState, "no master action " + std::to_string(action));
}

std::vector<SystemAct> SelectSystemAction(const PolicyLearner& policy, const SummarySpace& space,
                                          const BeliefState& belief, double explore, Rng& rng,
                                          Decision* decision) {
  const int state = space.Encode(belief);
  const int action = policy.Select(state, space.Mask(belief), explore, rng);
  if (decision) *decision = {state, action};
  return space.MapAction(action, belief);
}

PolicyAgent::PolicyAgent(const Ontology& ontology, const PolicyLearner& policy, double explore)
    : ontology_(ontology), policy_(policy), space_(ontology), explore_(explore) {
  if (policy.num_states() != space_.num_states() || policy.num_actions() != space_.num_actions()) {
    throw Error(ErrorCode::kDimensionMismatch, "policy does not fit this ontology");
  }
}

std::vector<SystemAct> PolicyAgent::Begin() {
  belief_ = BeliefState{};
  return {SystemAct::Make(SystemActType::kWelcomeMsg)};
}

std::vector<SystemAct> PolicyAgent::Respond(std::span<const UserAct> user_acts, Rng& rng,
                                            std::optional<Decision>* decision) {
  belief_ = UpdateBelief(belief_, user_acts, ontology_);
  Decision d;
  std::vector<SystemAct> acts = SelectSystemAction(policy_, space_, belief_, explore_, rng, &d);
  if (decision) *decision = d;
  belief_ = ApplySystemActs(belief_, acts);
  return acts;
}

ScriptedNoise ScriptedNoise::Corpus() {
  ScriptedNoise noise;
  noise.confirm_prob = 0.15;
  noise.wrong_confirm_prob = 0.3;
  noise.select_prob = 0.1;
  noise.early_offer_prob = 0.1;
  noise.repeat_prob = 0.03;
  return noise;
}

ScriptedAgent::ScriptedAgent(const Ontology& ontology, ScriptedNoise noise)
    : ontology_(ontology), space_(ontology), noise_(noise) {}

std::vector<SystemAct> ScriptedAgent::Begin() {
  belief_ = BeliefState{};
  return {SystemAct::Make(SystemActType::kWelcomeMsg)};
}

std::vector<SystemAct> ScriptedAgent::Respond(std::span<const UserAct> user_acts, Rng& rng,
                                              std::optional<Decision>* decision) {
  belief_ = UpdateBelief(belief_, user_acts, ontology_);
  std::vector<SystemAct> acts = Choose(user_acts, rng);
  if (decision) decision->reset();
  belief_ = ApplySystemActs(belief_, acts);
  return acts;
}

std::vector<SystemAct> ScriptedAgent::Choose(std::span<const UserAct> user_acts, Rng& rng) const {
  if (noise_.repeat_prob > 0.0 && rng.Bernoulli(noise_.repeat_prob)) {
    return {SystemAct::Make(SystemActType::kRepeat)};
  }
  if (OfferValid(belief_, ontology_) && !belief_.outstanding.empty()) {
    return space_.MapAction(space_.inform_action(), belief_);
  }

  // Confirmation of a slot the user just gave, possibly with a wrong value.
  std::optional<SystemAct> confirm;
  if (noise_.confirm_prob > 0.0 && rng.Bernoulli(noise_.confirm_prob)) {
    for (const UserAct& act : user_acts) {
      if (act.type != UserActType::kInform || act.payload.empty()) continue;
      const SlotValue& sv = act.payload.front();
      if (!ontology_.IsInformable(sv.slot)) continue;
      std::string value = sv.value;
      const auto& values = ontology_.Slot(sv.slot).values;
      if (rng.Bernoulli(noise_.wrong_confirm_prob) && values.size() > 1) {
        do {
          value = values[rng.UniformIndex(values.size())];
        } while (value == sv.value);
      }
      const bool explicit_conf = rng.Bernoulli(0.5);
      confirm = SystemAct::Pairs(
          explicit_conf ? SystemActType::kExplConf : SystemActType::kImplConf, {{sv.slot, value}});
      if (explicit_conf) return {*confirm};
      break;
    }
  }

  std::vector<SystemAct> acts;
  if (confirm) acts.push_back(*confirm);
  const bool early_offer = noise_.early_offer_prob > 0.0 &&
                           MatchingVenues(belief_, ontology_) > 0 &&
                           rng.Bernoulli(noise_.early_offer_prob);
  if (!early_offer) {
    for (const InformableSlot& slot : ontology_.informable()) {
      if (belief_.slots.count(slot.name)) continue;
      if (noise_.select_prob > 0.0 && slot.values.size() >= 2 && rng.Bernoulli(noise_.select_prob)) {
        const size_t a = rng.UniformIndex(slot.values.size());
        size_t b = rng.UniformIndex(slot.values.size() - 1);
        if (b >= a) ++b;
        acts.push_back(SystemAct::Pairs(SystemActType::kSelect,
                                        {{slot.name, slot.values[a]}, {slot.name, slot.values[b]}}));
      } else {
        acts.push_back(RequestAct(slot.name));
      }
      return acts;
    }
  }
  if (!OfferValid(belief_, ontology_)) {
    for (SystemAct& act : OfferActs(belief_, ontology_)) acts.push_back(std::move(act));
    return acts;
  }
  acts.push_back(SystemAct::Make(SystemActType::kReqMore));
  return acts;
}

std::vector<Transition> EpisodeFromRecord(const DialogueRecord& record) {
  std::vector<Transition> episode;
  for (const TurnRecord& turn : record.turns) {
    if (turn.decision) {
      episode.push_back({turn.decision->summary_state, turn.decision->master_action, turn.reward});
    }
  }
  return episode;
}

void EpisodeUpdate(PolicyLearner& policy, const DialogueRecord& record) {
  if (!record.complete) throw Error(ErrorCode::kIncompleteEpisode, "record not finalized");
  const std::vector<Transition> episode = EpisodeFromRecord(record);
  if (episode.empty()) throw Error(ErrorCode::kIncompleteEpisode, "record has no decisions");
  // Turns before the first decision (the greeting) charge the first step.
  std::vector<Transition> adjusted = episode;
  double leading = 0.0;
  for (const TurnRecord& turn : record.turns) {
    if (turn.decision) break;
    leading += turn.reward;
  }
  adjusted.front().reward += leading;
  policy.Observe(adjusted);
}

}  // namespace usersim
