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

#include "usersim/policy.h"

#include <cmath>

#include "usersim/checkpoint.h"
#include "usersim/errors.h"

namespace usersim {
namespace {

constexpr const char* kPolicyKind = "usersim.policy";

nlohmann::json Header(const PolicyLearner& learner) {
  return {{"format_version", kCheckpointFormatVersion},
          {"kind", kPolicyKind},
          {"learner", std::string(learner.kind())},
          {"num_states", learner.num_states()},
          {"num_actions", learner.num_actions()}};
}

void CheckHeader(const nlohmann::json& doc, std::string_view learner) {
  if (doc.at("kind").get<std::string>() != kPolicyKind ||
      doc.at("learner").get<std::string>() != learner) {
    throw Error(ErrorCode::kParse, "not a " + std::string(learner) + " policy");
  }
  if (doc.at("format_version").get<int>() != kCheckpointFormatVersion) {
    throw Error(ErrorCode::kParse, "unsupported policy version");
  }
}

}  // namespace

PolicyLearner::PolicyLearner(int num_states, int num_actions)
    : num_states_(num_states), num_actions_(num_actions) {
  if (num_states <= 0 || num_actions <= 0) {
    throw Error(ErrorCode::kConfig, "state and action counts must be positive");
  }
}

size_t PolicyLearner::Index(int state, int action) const {
  if (state < 0 || state >= num_states_ || action < 0 || action >= num_actions_) {
    throw Error(ErrorCode::kInvalidState,
                "state/action out of range: " + std::to_string(state) + "/" +
                    std::to_string(action));
  }
  return static_cast<size_t>(state) * num_actions_ + action;
}

void PolicyLearner::CheckEpisode(std::span<const Transition> episode) const {
  if (episode.empty()) throw Error(ErrorCode::kIncompleteEpisode, "empty episode");
  for (const Transition& t : episode) Index(t.state, t.action);
}

int PolicyLearner::Greedy(int state, const std::vector<bool>& mask) const {
  int best = -1;
  double best_value = 0.0;
  for (int a = 0; a < num_actions_; ++a) {
    if (!mask.at(a)) continue;
    const double v = Value(state, a);
    if (best < 0 || v > best_value) {
      best = a;
      best_value = v;
    }
  }
  if (best < 0) throw Error(ErrorCode::kInvalidState, "every action is masked");
  return best;
}

int PolicyLearner::UniformLegal(const std::vector<bool>& mask, Rng& rng) const {
  std::vector<int> legal;
  for (int a = 0; a < num_actions_; ++a) {
    if (mask.at(a)) legal.push_back(a);
  }
  if (legal.empty()) throw Error(ErrorCode::kInvalidState, "every action is masked");
  return legal[rng.UniformIndex(legal.size())];
}

KernelSarsaLearner::KernelSarsaLearner(int num_states, int num_actions, KernelSarsaConfig config)
    : PolicyLearner(num_states, num_actions),
      config_(config),
      mean_(static_cast<size_t>(num_states) * num_actions, 0.0),
      count_(static_cast<size_t>(num_states) * num_actions, 0.0) {}

int KernelSarsaLearner::Select(int state, const std::vector<bool>& mask, double explore,
                               Rng& rng) const {
  if (explore <= 0.0 || !rng.Bernoulli(explore)) return Greedy(state, mask);
  int best = -1;
  double best_sample = 0.0;
  for (int a = 0; a < num_actions_; ++a) {
    if (!mask.at(a)) continue;
    const size_t i = Index(state, a);
    const double sample =
        mean_[i] + config_.prior_std / std::sqrt(count_[i] + 1.0) * rng.Normal();
    if (best < 0 || sample > best_sample) {
      best = a;
      best_sample = sample;
    }
  }
  if (best < 0) throw Error(ErrorCode::kInvalidState, "every action is masked");
  return best;
}

void KernelSarsaLearner::Observe(std::span<const Transition> episode) {
  CheckEpisode(episode);
  for (size_t t = episode.size(); t-- > 0;) {
    double target = episode[t].reward;
    if (t + 1 < episode.size()) target += mean_[Index(episode[t + 1].state, episode[t + 1].action)];
    const size_t i = Index(episode[t].state, episode[t].action);
    count_[i] += 1.0;
    const double step = std::max(1.0 / (count_[i] - 1.0 + config_.kappa), config_.min_step);
    mean_[i] += std::min(step, 1.0) * (target - mean_[i]);
  }
}

nlohmann::json KernelSarsaLearner::ToJson() const {
  nlohmann::json doc = Header(*this);
  doc["config"] = {{"kappa", config_.kappa},
                   {"min_step", config_.min_step},
                   {"prior_std", config_.prior_std}};
  nlohmann::json entries = nlohmann::json::array();
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_actions_; ++a) {
      const size_t i = Index(s, a);
      if (count_[i] > 0.0 || mean_[i] != 0.0) entries.push_back({s, a, mean_[i], count_[i]});
    }
  }
  doc["entries"] = std::move(entries);
  return doc;
}

std::unique_ptr<KernelSarsaLearner> KernelSarsaLearner::FromJson(const nlohmann::json& doc) {
  CheckHeader(doc, "kernel-sarsa");
  KernelSarsaConfig config;
  const auto& c = doc.at("config");
  config.kappa = c.at("kappa").get<double>();
  config.min_step = c.at("min_step").get<double>();
  config.prior_std = c.at("prior_std").get<double>();
  auto learner = std::make_unique<KernelSarsaLearner>(doc.at("num_states").get<int>(),
                                                      doc.at("num_actions").get<int>(), config);
  for (const auto& e : doc.at("entries")) {
    const size_t i = learner->Index(e.at(0).get<int>(), e.at(1).get<int>());
    learner->mean_[i] = e.at(2).get<double>();
    learner->count_[i] = e.at(3).get<double>();
  }
  return learner;
}

SarsaLambdaLearner::SarsaLambdaLearner(int num_states, int num_actions, SarsaLambdaConfig config)
    : PolicyLearner(num_states, num_actions),
      config_(config),
      q_(static_cast<size_t>(num_states) * num_actions, 0.0) {}

int SarsaLambdaLearner::Select(int state, const std::vector<bool>& mask, double explore,
                               Rng& rng) const {
  if (explore > 0.0 && rng.Bernoulli(explore)) return UniformLegal(mask, rng);
  return Greedy(state, mask);
}

void SarsaLambdaLearner::Observe(std::span<const Transition> episode) {
  CheckEpisode(episode);
  std::vector<std::pair<size_t, double>> traces;
  for (size_t t = 0; t < episode.size(); ++t) {
    const size_t i = Index(episode[t].state, episode[t].action);
    double target = episode[t].reward;
    if (t + 1 < episode.size()) {
      target += config_.gamma * q_[Index(episode[t + 1].state, episode[t + 1].action)];
    }
    const double delta = target - q_[i];
    bool found = false;
    for (auto& [index, e] : traces) {
      if (index == i) {
        e += 1.0;
        found = true;
      }
    }
    if (!found) traces.emplace_back(i, 1.0);
    for (auto& [index, e] : traces) {
      q_[index] += config_.alpha * delta * e;
      e *= config_.gamma * config_.lambda;
    }
  }
}

nlohmann::json SarsaLambdaLearner::ToJson() const {
  nlohmann::json doc = Header(*this);
  doc["config"] = {
      {"alpha", config_.alpha}, {"lambda", config_.lambda}, {"gamma", config_.gamma}};
  nlohmann::json entries = nlohmann::json::array();
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_actions_; ++a) {
      const double q = q_[Index(s, a)];
      if (q != 0.0) entries.push_back({s, a, q});
    }
  }
  doc["entries"] = std::move(entries);
  return doc;
}

std::unique_ptr<SarsaLambdaLearner> SarsaLambdaLearner::FromJson(const nlohmann::json& doc) {
  CheckHeader(doc, "sarsa-lambda");
  SarsaLambdaConfig config;
  const auto& c = doc.at("config");
  config.alpha = c.at("alpha").get<double>();
  config.lambda = c.at("lambda").get<double>();
  config.gamma = c.at("gamma").get<double>();
  auto learner = std::make_unique<SarsaLambdaLearner>(doc.at("num_states").get<int>(),
                                                      doc.at("num_actions").get<int>(), config);
  for (const auto& e : doc.at("entries")) {
    learner->q_[learner->Index(e.at(0).get<int>(), e.at(1).get<int>())] = e.at(2).get<double>();
  }
  return learner;
}

std::unique_ptr<PolicyLearner> MakeLearner(std::string_view kind, int num_states,
                                           int num_actions) {
  if (kind == "kernel-sarsa") return std::make_unique<KernelSarsaLearner>(num_states, num_actions);
  if (kind == "sarsa-lambda") return std::make_unique<SarsaLambdaLearner>(num_states, num_actions);
  throw Error(ErrorCode::kConfig, "unknown learner " + std::string(kind));
}

std::unique_ptr<PolicyLearner> LearnerFromJson(const nlohmann::json& doc) {
  try {
    const std::string learner = doc.at("learner").get<std::string>();
    if (learner == "kernel-sarsa") return KernelSarsaLearner::FromJson(doc);
    if (learner == "sarsa-lambda") return SarsaLambdaLearner::FromJson(doc);
    throw Error(ErrorCode::kParse, "unknown learner " + learner);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed policy: ") + e.what());
  }
}

void SavePolicy(const std::string& path, const PolicyLearner& learner) {
  WriteJsonFile(path, learner.ToJson());
}

std::unique_ptr<PolicyLearner> LoadPolicy(const std::string& path) {
  return LearnerFromJson(ReadJsonFile(path));
}

double AnnealedRate(int episode, int num_episodes, double start, double end) {
  if (num_episodes <= 1) return start;
  const double frac = static_cast<double>(episode) / static_cast<double>(num_episodes - 1);
  return start + (end - start) * std::min(1.0, std::max(0.0, frac));
}

}  // namespace usersim
