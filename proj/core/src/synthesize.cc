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

#include "usersim/synthesize.h"

#include "usersim/errors.h"

namespace usersim {

RawDialogue SynthesizeDialogue(const Ontology& ontology, const UserTemplates& templates,
                               const SynthesisConfig& config, Rng& rng) {
  AgendaSimulator user(ontology, config.goals, config.agenda);
  ScriptedAgent system(ontology, config.noise);
  user.Reset(rng);
  RawDialogue dialogue;
  dialogue.requests = user.goal().requests;
  Constraints labels;
  std::vector<SystemAct> acts = system.Begin();
  for (int turn = 0; turn < config.max_turns; ++turn) {
    const UserOutput out = user.Respond(acts, rng);
    const std::vector<UserAct>& user_acts = *out.acts;
    for (const UserAct& act : user_acts) {
      if (act.type != UserActType::kInform) continue;
      for (const SlotValue& sv : act.payload) {
        if (sv.value != kDontCare) labels[sv.slot] = sv.value;
      }
    }
    dialogue.turns.push_back({acts, templates.Render(user_acts, &rng), labels});
    if (ContainsAct(user_acts, UserActType::kBye)) break;
    acts = system.Respond(user_acts, rng, nullptr);
  }
  return dialogue;
}

std::vector<RawDialogue> SynthesizeCorpus(const Ontology& ontology, int n, uint64_t seed,
                                          const SynthesisConfig& config) {
  if (n < 0) throw Error(ErrorCode::kConfig, "corpus size must be non-negative");
  const UserTemplates templates = UserTemplates::Default();
  const Rng root(seed);
  std::vector<RawDialogue> corpus;
  corpus.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng = root.Split("synth", static_cast<uint64_t>(i));
    RawDialogue d = SynthesizeDialogue(ontology, templates, config, rng);
    d.id = std::to_string(i);
    corpus.push_back(std::move(d));
  }
  return corpus;
}

}  // namespace usersim
