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

#ifndef USERSIM_HARNESS_H_
#define USERSIM_HARNESS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/dialogue_manager.h"
#include "usersim/dialogue_record.h"
#include "usersim/goal.h"
#include "usersim/ontology.h"
#include "usersim/policy.h"
#include "usersim/semantic_decoder.h"
#include "usersim/system_renderer.h"
#include "usersim/user_simulator.h"

namespace usersim {

// What a dialogue needs besides the two participants. The decoder turns
// simulator text into acts; the renderer, when set, fills system_text.
struct DialogueEnv {
  const Ontology* ontology = nullptr;
  const CachingDecoder* decoder = nullptr;
  const SystemRenderer* renderer = nullptr;
  int max_turns = kMaxDialogueTurns;
};

// Resets both sides (with `goal` when given), lets the system open, and
// alternates until either side says bye or the turn cap is hit. Success is
// judged on the simulator's final goal.
DialogueRecord RunDialogue(SystemAgent& system, UserSimulator& user, const DialogueEnv& env,
                           Rng& rng, const std::optional<Goal>& goal = std::nullopt);

struct CurvePoint {
  int episode = 0;
  double total_return = 0.0;
  bool success = false;
  int turns = 0;
  double epsilon = 0.0;
};

struct PolicyTrainConfig {
  std::string learner = "kernel-sarsa";
  int n_dialogues = 4000;
  double explore_start = 0.3;
  double explore_end = 0.0;
  uint64_t seed = 1;
};

struct PolicyTrainResult {
  std::unique_ptr<PolicyLearner> policy;
  std::vector<CurvePoint> curve;
};

// n_dialogues episodes of RunDialogue followed by an episode update, with
// the exploration rate annealed linearly.
PolicyTrainResult TrainPolicy(UserSimulator& user, const DialogueEnv& env,
                              const PolicyTrainConfig& config);

// episode,return,success,turns,epsilon
std::string CurveCsv(const std::vector<CurvePoint>& curve);
// Success rate in percent over the last `window` episodes.
double TrailingSuccessRate(const std::vector<CurvePoint>& curve, size_t window);

struct EvalResult {
  int dialogues = 0;
  double success_rate = 0.0;  // percent
  double avg_reward = 0.0;
  double avg_turns = 0.0;

  nlohmann::json ToJson() const;
};

// Goal and dialogue streams for test dialogue i; identical for every policy
// and simulator so cells are comparable.
Goal TestGoal(const GoalSampler& sampler, uint64_t seed, int index);
Rng TestDialogueRng(uint64_t seed, int index);

// Greedy policy on n test dialogues. `on_record` sees every record.
EvalResult EvaluatePolicy(const PolicyLearner& policy, UserSimulator& user, const DialogueEnv& env,
                          const GoalSampler& sampler, int n_dialogues, uint64_t seed,
                          const std::function<void(const DialogueRecord&)>& on_record = nullptr);

struct CellReport {
  std::vector<EvalResult> per_seed;
  EvalResult best;  // highest average reward, then success rate
  EvalResult mean;
};

// Train simulator x evaluation simulator matrix.
struct MetricsReport {
  std::vector<std::string> train_sims;
  std::vector<std::string> eval_sims;
  std::map<std::pair<std::string, std::string>, CellReport> cells;
  int n_test_dialogues = 0;

  const CellReport& cell(const std::string& train, const std::string& eval) const;
  nlohmann::json ToJson() const;
  // train_sim,eval_sim,row,seed,success_rate,avg_reward,avg_turns
  std::string Csv() const;
  // Best and mean rows per training simulator, one column pair per
  // evaluation simulator, with the published reference next to each cell
  // when `reference` has it.
  std::string Table(const nlohmann::json& reference = nlohmann::json()) const;
};

CellReport SummarizeCell(std::vector<EvalResult> per_seed);

// Every policy on every simulator over the same test goals.
MetricsReport CrossEvaluate(
    const std::vector<std::pair<std::string, std::vector<const PolicyLearner*>>>& policies,
    const std::vector<std::pair<std::string, UserSimulator*>>& simulators, const DialogueEnv& env,
    const GoalSampler& sampler, int n_test_dialogues, uint64_t seed);

// Published cross-model results ({"4000": {...}, "1000": {...}}), keyed
// "<train>/<eval>/<best|mean>" with success rate and reward.
nlohmann::json PublishedReference();

}  // namespace usersim

#endif  // USERSIM_HARNESS_H_
