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

#ifndef USERSIM_DIALOGUE_MANAGER_H_
#define USERSIM_DIALOGUE_MANAGER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "usersim/belief.h"
#include "usersim/dialogue_record.h"
#include "usersim/ontology.h"
#include "usersim/policy.h"
#include "usersim/rng.h"

namespace usersim {

// Discrete summary of a belief and the master actions a policy chooses from.
//
// State: known flag per informable slot, matching-venue bucket
// {0, 1, 2-4, 5+}, outstanding-request flag, valid-offer flag and the code of
// the dominant last user act. Actions: request(slot) per informable slot,
// offer, inform-requested, bye.
class SummarySpace {
 public:
  explicit SummarySpace(const Ontology& ontology);

  int num_states() const { return num_states_; }
  int num_actions() const { return n_inf_ + 3; }
  int request_action(int slot_index) const { return slot_index; }
  int offer_action() const { return n_inf_; }
  int inform_action() const { return n_inf_ + 1; }
  int bye_action() const { return n_inf_ + 2; }
  std::string ActionName(int action) const;

  int Encode(const BeliefState& belief) const;
  // inform-requested needs an offered venue and an outstanding request. Offer
  // stays legal with no matching venue; it then maps to canthelp.
  std::vector<bool> Mask(const BeliefState& belief) const;
  std::vector<SystemAct> MapAction(int action, const BeliefState& belief) const;

  static int CountBucket(size_t matches);
  // Dominant act of a user turn: reqalts, negate, request, inform, affirm,
  // thankyou, bye, then null.
  static int LastActCode(std::span<const UserActType> acts);

  const Ontology& ontology() const { return ontology_; }

 private:
  const Ontology& ontology_;
  int n_inf_;
  int num_states_;
};

// Offer: the first matching venue not rejected, with its informable values;
// canthelp with the believed constraints when there is none.
std::vector<SystemAct> OfferActs(const BeliefState& belief, const Ontology& ontology);

// The system side of a dialogue.
class SystemAgent {
 public:
  virtual ~SystemAgent() = default;

  // Clears the belief and returns the opening turn.
  virtual std::vector<SystemAct> Begin() = 0;
  // Tracks the user's acts and answers. `decision` receives the learner's
  // view when the agent is policy-driven.
  virtual std::vector<SystemAct> Respond(std::span<const UserAct> user_acts, Rng& rng,
                                         std::optional<Decision>* decision) = 0;
  virtual const BeliefState& belief() const = 0;
};

// Master action chosen by a learner, mapped to full acts.
std::vector<SystemAct> SelectSystemAction(const PolicyLearner& policy, const SummarySpace& space,
                                          const BeliefState& belief, double explore, Rng& rng,
                                          Decision* decision);

class PolicyAgent : public SystemAgent {
 public:
  PolicyAgent(const Ontology& ontology, const PolicyLearner& policy, double explore = 0.0);

  std::vector<SystemAct> Begin() override;
  std::vector<SystemAct> Respond(std::span<const UserAct> user_acts, Rng& rng,
                                 std::optional<Decision>* decision) override;
  const BeliefState& belief() const override { return belief_; }

  void set_explore(double explore) { explore_ = explore; }
  const SummarySpace& space() const { return space_; }

 private:
  const Ontology& ontology_;
  const PolicyLearner& policy_;
  SummarySpace space_;
  double explore_;
  BeliefState belief_;
};

// Perturbations of the scripted controller, for corpus variety.
struct ScriptedNoise {
  double confirm_prob = 0.0;        // confirm the slot the user just gave
  double wrong_confirm_prob = 0.0;  // ...with a wrong value
  double select_prob = 0.0;         // ask with select instead of request
  double early_offer_prob = 0.0;    // offer before every slot is known
  double repeat_prob = 0.0;

  static ScriptedNoise Corpus();
};

// Hand-written controller: answer outstanding requests for the offered
// venue, else ask for the first unknown slot, else offer (or canthelp), else
// reqmore.
class ScriptedAgent : public SystemAgent {
 public:
  ScriptedAgent(const Ontology& ontology, ScriptedNoise noise = {});

  std::vector<SystemAct> Begin() override;
  std::vector<SystemAct> Respond(std::span<const UserAct> user_acts, Rng& rng,
                                 std::optional<Decision>* decision) override;
  const BeliefState& belief() const override { return belief_; }

 private:
  std::vector<SystemAct> Choose(std::span<const UserAct> user_acts, Rng& rng) const;

  const Ontology& ontology_;
  SummarySpace space_;
  ScriptedNoise noise_;
  BeliefState belief_;
};

// Decision turns of a finished record as learner transitions, each carrying
// the reward of its turn.
std::vector<Transition> EpisodeFromRecord(const DialogueRecord& record);
// Throws kIncompleteEpisode for unfinished records or records without a
// decision.
void EpisodeUpdate(PolicyLearner& policy, const DialogueRecord& record);

}  // namespace usersim

#endif  // USERSIM_DIALOGUE_MANAGER_H_
