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

#ifndef USERSIM_POLICY_H_
#define USERSIM_POLICY_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/rng.h"

namespace usersim {

struct Transition {
  int state = 0;
  int action = 0;
  double reward = 0.0;
};

// Episodic learner over a discrete state and action space.
class PolicyLearner {
 public:
  PolicyLearner(int num_states, int num_actions);
  virtual ~PolicyLearner() = default;

  virtual std::string_view kind() const = 0;
  virtual double Value(int state, int action) const = 0;
  // Picks an action allowed by `mask`; with probability `explore` the
  // learner's exploration rule is used instead of the greedy choice.
  virtual int Select(int state, const std::vector<bool>& mask, double explore,
                     Rng& rng) const = 0;
  // Learns from one finished episode. Throws kIncompleteEpisode when empty.
  virtual void Observe(std::span<const Transition> episode) = 0;
  virtual nlohmann::json ToJson() const = 0;

  // Highest-valued allowed action; ties go to the lower index.
  int Greedy(int state, const std::vector<bool>& mask) const;

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

 protected:
  size_t Index(int state, int action) const;
  void CheckEpisode(std::span<const Transition> episode) const;
  int UniformLegal(const std::vector<bool>& mask, Rng& rng) const;

  int num_states_;
  int num_actions_;
};

struct KernelSarsaConfig {
  // Step size max(1 / (n + kappa), min_step) after n visits.
  double kappa = 1.0;
  double min_step = 0.05;
  // Prior standard deviation of an unvisited value; shrinks with visits.
  double prior_std = 10.0;
};

// SARSA over a Kronecker-delta kernel on the summary state: each
// (state, action) keeps a posterior mean and visit count. Exploration draws
// one value per legal action from mean + std / sqrt(n + 1) * N(0, 1) and
// takes the best. Episodes are replayed backwards so the final reward
// reaches every step of the episode in one update.
class KernelSarsaLearner : public PolicyLearner {
 public:
  KernelSarsaLearner(int num_states, int num_actions, KernelSarsaConfig config = {});

  std::string_view kind() const override { return "kernel-sarsa"; }
  double Value(int state, int action) const override { return mean_[Index(state, action)]; }
  double Visits(int state, int action) const { return count_[Index(state, action)]; }
  int Select(int state, const std::vector<bool>& mask, double explore, Rng& rng) const override;
  void Observe(std::span<const Transition> episode) override;
  nlohmann::json ToJson() const override;
  static std::unique_ptr<KernelSarsaLearner> FromJson(const nlohmann::json& doc);

 private:
  KernelSarsaConfig config_;
  std::vector<double> mean_;
  std::vector<double> count_;
};

struct SarsaLambdaConfig {
  double alpha = 0.1;
  double lambda = 0.9;
  double gamma = 1.0;
};

// Tabular SARSA(lambda) with accumulating traces and epsilon-greedy
// exploration.
class SarsaLambdaLearner : public PolicyLearner {
 public:
  SarsaLambdaLearner(int num_states, int num_actions, SarsaLambdaConfig config = {});

  std::string_view kind() const override { return "sarsa-lambda"; }
  double Value(int state, int action) const override { return q_[Index(state, action)]; }
  int Select(int state, const std::vector<bool>& mask, double explore, Rng& rng) const override;
  void Observe(std::span<const Transition> episode) override;
  nlohmann::json ToJson() const override;
  static std::unique_ptr<SarsaLambdaLearner> FromJson(const nlohmann::json& doc);

 private:
  SarsaLambdaConfig config_;
  std::vector<double> q_;
};

// kind is "kernel-sarsa" or "sarsa-lambda"; throws kConfig otherwise.
std::unique_ptr<PolicyLearner> MakeLearner(std::string_view kind, int num_states,
                                           int num_actions);
std::unique_ptr<PolicyLearner> LearnerFromJson(const nlohmann::json& doc);
void SavePolicy(const std::string& path, const PolicyLearner& learner);
std::unique_ptr<PolicyLearner> LoadPolicy(const std::string& path);

// Linear decay from `start` at episode 0 to `end` at the last episode.
double AnnealedRate(int episode, int num_episodes, double start = 0.3, double end = 0.0);

}  // namespace usersim

#endif  // USERSIM_POLICY_H_
