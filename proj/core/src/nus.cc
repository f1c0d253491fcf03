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

#include "usersim/nus.h"

#include <algorithm>

#include "usersim/delexicalize.h"
#include "usersim/errors.h"

namespace usersim {

NeuralSimulator::NeuralSimulator(const Ontology& ontology, const nn::Seq2SeqModel& model,
                                 GoalSamplerConfig goal_config, NeuralSimulatorConfig config,
                                 UserTemplates templates)
    : ontology_(ontology),
      model_(model),
      sampler_(ontology, std::move(goal_config)),
      config_(config),
      templates_(std::move(templates)),
      extractor_(ontology) {
  if (static_cast<size_t>(model.dims.feature_dim) != extractor_.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "model feature size " +
                                                   std::to_string(model.dims.feature_dim) +
                                                   " does not fit the ontology");
  }
}

void NeuralSimulator::Reset(Rng& rng) { ResetWithGoal(sampler_.Sample(rng), rng); }

void NeuralSimulator::ResetWithGoal(const Goal& goal, Rng&) {
  goal_ = goal;
  goal_changed_ = false;
  last_fallback_ = false;
  turn_ = 0;
  state_ = extractor_.InitState(goal_);
  history_.clear();
  encoder_.emplace(model_);
  ready_ = true;
}

std::string NeuralSimulator::Generate(const Eigen::VectorXd& p, Rng& rng,
                                      std::vector<int>* tokens) {
  *tokens = nn::GenerateBeamSample(model_, p, config_.n_beams, config_.max_len, rng);
  const std::vector<std::string> words = model_.vocab.Decode(*tokens);
  const LexicalizeResult lex = Lexicalize(words, goal_, state_.accepted_venue);
  stats_.unfilled_slots += lex.unfilled_slots;
  stats_.unknown_tokens += lex.unknown_tokens;
  return lex.text;
}

UserOutput NeuralSimulator::Respond(std::span<const SystemAct> acts, Rng& rng) {
  if (!ready_) throw Error(ErrorCode::kInvalidState, "neural simulator used before reset");
  goal_changed_ = false;
  last_fallback_ = false;
  std::optional<std::string> changed_slot;
  for (const SystemAct& act : acts) {
    if (act.type != SystemActType::kCantHelp) continue;
    GoalUpdate update = ApplyCantHelp(goal_, act, rng, ontology_, turn_);
    goal_ = std::move(update.goal);
    if (update.changed_slot) changed_slot = update.changed_slot;
  }
  goal_changed_ = changed_slot.has_value();

  auto [features, next] = extractor_.Extract(state_, acts, goal_);
  state_ = std::move(next);
  encoder_->Push(features.Dense());
  history_.push_back(std::move(features));
  const Eigen::VectorXd p = encoder_->Encoding();
  ++turn_;
  ++stats_.turns;

  std::vector<int> tokens;
  std::string text = Generate(p, rng, &tokens);
  if (changed_slot) {
    ++stats_.goal_changes;
    const int wanted = model_.vocab.Id(ValueToken(*changed_slot));
    auto mentions = [&] {
      return wanted >= 0 && std::find(tokens.begin(), tokens.end(), wanted) != tokens.end();
    };
    for (int attempt = 0; attempt < config_.max_regenerations && !mentions(); ++attempt) {
      ++stats_.regenerations;
      text = Generate(p, rng, &tokens);
    }
    if (!mentions()) {
      ++stats_.fallbacks;
      last_fallback_ = true;
      const UserAct inform = UserAct::Inform(*changed_slot, goal_.constraints.at(*changed_slot));
      text = templates_.Render(std::span<const UserAct>(&inform, 1), &rng);
    }
  }
  return UserOutput::Text(std::move(text));
}

}  // namespace usersim
