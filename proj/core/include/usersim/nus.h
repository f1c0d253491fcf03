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

#ifndef USERSIM_NUS_H_
#define USERSIM_NUS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "usersim/beam_search.h"
#include "usersim/features.h"
#include "usersim/goal.h"
#include "usersim/ontology.h"
#include "usersim/seq2seq.h"
#include "usersim/user_simulator.h"
#include "usersim/user_templates.h"

namespace usersim {

struct NeuralSimulatorConfig {
  int n_beams = nn::kDefaultBeams;
  int max_len = nn::kDefaultMaxDecodeLength;
  // Extra generations allowed to mention a changed goal value.
  int max_regenerations = 10;
};

// Counters over the simulator's lifetime.
struct NeuralSimulatorStats {
  int64_t turns = 0;
  int64_t goal_changes = 0;
  int64_t regenerations = 0;
  int64_t fallbacks = 0;
  int64_t unfilled_slots = 0;
  int64_t unknown_tokens = 0;
};

// Neural user simulator: goal, feature history and a seq2seq model that
// writes delexicalized utterances, filled in from the current goal.
class NeuralSimulator : public UserSimulator {
 public:
  NeuralSimulator(const Ontology& ontology, const nn::Seq2SeqModel& model,
                  GoalSamplerConfig goal_config = {}, NeuralSimulatorConfig config = {},
                  UserTemplates templates = UserTemplates::Default());

  void Reset(Rng& rng) override;
  void ResetWithGoal(const Goal& goal, Rng& rng) override;
  UserOutput Respond(std::span<const SystemAct> acts, Rng& rng) override;

  const Goal& goal() const override { return goal_; }
  bool goal_changed() const override { return goal_changed_; }
  std::string_view name() const override { return "nus"; }

  size_t history_length() const { return encoder_ ? encoder_->length() : 0; }
  const std::vector<FeatureVector>& history() const { return history_; }
  const ExtractorState& extractor_state() const { return state_; }
  // True when the last answer came from the template fallback.
  bool last_used_fallback() const { return last_fallback_; }
  const NeuralSimulatorStats& stats() const { return stats_; }

 private:
  std::string Generate(const Eigen::VectorXd& p, Rng& rng, std::vector<int>* tokens);

  const Ontology& ontology_;
  const nn::Seq2SeqModel& model_;
  GoalSampler sampler_;
  NeuralSimulatorConfig config_;
  UserTemplates templates_;
  FeatureExtractor extractor_;

  bool ready_ = false;
  int turn_ = 0;
  Goal goal_;
  bool goal_changed_ = false;
  bool last_fallback_ = false;
  ExtractorState state_;
  std::vector<FeatureVector> history_;
  std::optional<nn::HistoryEncoder> encoder_;
  NeuralSimulatorStats stats_;
};

}  // namespace usersim

#endif  // USERSIM_NUS_H_
