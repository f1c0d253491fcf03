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

#ifndef USERSIM_SYNTHESIZE_H_
#define USERSIM_SYNTHESIZE_H_

#include <cstdint>
#include <vector>

#include "usersim/abus.h"
#include "usersim/corpus.h"
#include "usersim/dialogue_manager.h"
#include "usersim/dialogue_record.h"
#include "usersim/goal.h"
#include "usersim/ontology.h"
#include "usersim/user_templates.h"

namespace usersim {

struct SynthesisConfig {
  GoalSamplerConfig goals;
  AgendaConfig agenda;
  ScriptedNoise noise = ScriptedNoise::Corpus();
  int max_turns = kMaxDialogueTurns;
};

// Agenda simulator with template surface forms talking to the scripted
// controller. Labels accumulate the non-dontcare values the user informs.
RawDialogue SynthesizeDialogue(const Ontology& ontology, const UserTemplates& templates,
                               const SynthesisConfig& config, Rng& rng);

// n dialogues; dialogue i draws from the stream Split("synth", i) of seed.
std::vector<RawDialogue> SynthesizeCorpus(const Ontology& ontology, int n, uint64_t seed,
                                          const SynthesisConfig& config = {});

}  // namespace usersim

#endif  // USERSIM_SYNTHESIZE_H_
