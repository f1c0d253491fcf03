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

#include "usersim/harness.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <glog/logging.h>

#include "usersim/errors.h"

namespace usersim {

DialogueRecord RunDialogue(SystemAgent& system, UserSimulator& user, const DialogueEnv& env,
                           Rng& rng, const std::optional<Goal>& goal) {
  if (env.ontology == nullptr) throw Error(ErrorCode::kConfig, "dialogue without an ontology");
  if (goal) {
    user.ResetWithGoal(*goal, rng);
  } else {
    user.Reset(rng);
  }
  DialogueRecord record;
  record.seed = rng.seed();
  record.simulator = std::string(user.name());
  record.initial_goal = user.goal();

  std::vector<SystemAct> acts = system.Begin();
  std::optional<Decision> decision;
  for (int turn = 0; turn < env.max_turns; ++turn) {
    TurnRecord tr;
    tr.system_acts = acts;
    tr.decision = decision;
    if (env.renderer) tr.system_text = env.renderer->Render(acts);
    if (ContainsAct(std::span<const SystemAct>(acts), SystemActType::kBye)) {
      record.turns.push_back(std::move(tr));
      break;
    }
    try {
      tr.user = user.Respond(acts, rng);
    } catch (const Error& e) {
      throw Error(e.code(), "turn " + std::to_string(turn) + ": " + e.what());
    }
    tr.goal_changed = user.goal_changed();
    if (tr.user.acts) {
      tr.decoded = *tr.user.acts;
    } else if (tr.user.text) {
      if (env.decoder == nullptr) throw Error(ErrorCode::kConfig, "text simulator without decoder");
      tr.decoded = env.decoder->Parse(*tr.user.text);
    } else {
      throw Error(ErrorCode::kInvalidState, "turn " + std::to_string(turn) + ": empty user output");
    }
    const bool user_bye = ContainsAct(std::span<const UserAct>(tr.decoded), UserActType::kBye);
    std::vector<UserAct> decoded = tr.decoded;
    record.turns.push_back(std::move(tr));
    if (user_bye) break;
    decision.reset();
    acts = system.Respond(decoded, rng, &decision);
  }
  record.final_goal = user.goal();
  FinalizeRecord(record, GoalSatisfied(record.final_goal, record, *env.ontology));
  return record;
}

PolicyTrainResult TrainPolicy(UserSimulator& user, const DialogueEnv& env,
                              const PolicyTrainConfig& config) {
  if (config.n_dialogues < 1) throw Error(ErrorCode::kConfig, "n_dialogues must be >= 1");
  const SummarySpace space(*env.ontology);
  PolicyTrainResult result;
  result.policy = MakeLearner(config.learner, space.num_states(), space.num_actions());
  PolicyAgent agent(*env.ontology, *result.policy);
  const Rng root(config.seed);
  for (int episode = 0; episode < config.n_dialogues; ++episode) {
    const double epsilon =
        AnnealedRate(episode, config.n_dialogues, config.explore_start, config.explore_end);
    agent.set_explore(epsilon);
    Rng rng = root.Split("train-dialogue", static_cast<uint64_t>(episode));
    const DialogueRecord record = RunDialogue(agent, user, env, rng);
    if (!EpisodeFromRecord(record).empty()) EpisodeUpdate(*result.policy, record);
    result.curve.push_back({episode, record.TotalReward(), record.success,
                            static_cast<int>(record.num_turns()), epsilon});
  }
  return result;
}

std::string CurveCsv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "episode,return,success,turns,epsilon\n";
  for (const CurvePoint& p : curve) {
    out << p.episode << ',' << p.total_return << ',' << (p.success ? 1 : 0) << ',' << p.turns
        << ',' << p.epsilon << '\n';
  }
  return out.str();
}

double TrailingSuccessRate(const std::vector<CurvePoint>& curve, size_t window) {
  if (curve.empty() || window == 0) return 0.0;
  const size_t n = std::min(window, curve.size());
  size_t wins = 0;
  for (size_t i = curve.size() - n; i < curve.size(); ++i) wins += curve[i].success ? 1 : 0;
  return 100.0 * static_cast<double>(wins) / static_cast<double>(n);
}

nlohmann::json EvalResult::ToJson() const {
  return {{"dialogues", dialogues},
          {"success_rate", success_rate},
          {"avg_reward", avg_reward},
          {"avg_turns", avg_turns}};
}

Goal TestGoal(const GoalSampler& sampler, uint64_t seed, int index) {
  Rng rng = Rng(seed).Split("test-goal", static_cast<uint64_t>(index));
  return sampler.Sample(rng);
}

Rng TestDialogueRng(uint64_t seed, int index) {
  return Rng(seed).Split("test-dialogue", static_cast<uint64_t>(index));
}

EvalResult EvaluatePolicy(const PolicyLearner& policy, UserSimulator& user, const DialogueEnv& env,
                          const GoalSampler& sampler, int n_dialogues, uint64_t seed,
                          const std::function<void(const DialogueRecord&)>& on_record) {
  if (n_dialogues < 1) throw Error(ErrorCode::kConfig, "n_test_dialogues must be >= 1");
  PolicyAgent agent(*env.ontology, policy, 0.0);
  EvalResult result;
  result.dialogues = n_dialogues;
  int successes = 0;
  double reward = 0.0;
  double turns = 0.0;
  for (int i = 0; i < n_dialogues; ++i) {
    Rng rng = TestDialogueRng(seed, i);
    const DialogueRecord record = RunDialogue(agent, user, env, rng, TestGoal(sampler, seed, i));
    successes += record.success ? 1 : 0;
    reward += record.TotalReward();
    turns += static_cast<double>(record.num_turns());
    if (on_record) on_record(record);
  }
  result.success_rate = 100.0 * successes / n_dialogues;
  result.avg_reward = reward / n_dialogues;
  result.avg_turns = turns / n_dialogues;
  return result;
}

CellReport SummarizeCell(std::vector<EvalResult> per_seed) {
  if (per_seed.empty()) throw Error(ErrorCode::kEmptyInput, "cell without results");
  CellReport cell;
  cell.per_seed = std::move(per_seed);
  cell.best = *std::max_element(
      cell.per_seed.begin(), cell.per_seed.end(), [](const EvalResult& a, const EvalResult& b) {
        if (a.avg_reward != b.avg_reward) return a.avg_reward < b.avg_reward;
        return a.success_rate < b.success_rate;
      });
  const double n = static_cast<double>(cell.per_seed.size());
  for (const EvalResult& r : cell.per_seed) {
    cell.mean.dialogues += r.dialogues;
    cell.mean.success_rate += r.success_rate / n;
    cell.mean.avg_reward += r.avg_reward / n;
    cell.mean.avg_turns += r.avg_turns / n;
  }
  return cell;
}

const CellReport& MetricsReport::cell(const std::string& train, const std::string& eval) const {
  auto it = cells.find({train, eval});
  if (it == cells.end()) throw Error(ErrorCode::kNotFound, "no cell " + train + "/" + eval);
  return it->second;
}

nlohmann::json MetricsReport::ToJson() const {
  nlohmann::json doc;
  doc["n_test_dialogues"] = n_test_dialogues;
  doc["train_sims"] = train_sims;
  doc["eval_sims"] = eval_sims;
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& [key, cell] : cells) {
    nlohmann::json per_seed = nlohmann::json::array();
    for (const EvalResult& r : cell.per_seed) per_seed.push_back(r.ToJson());
    cells_json.push_back({{"train", key.first},
                          {"eval", key.second},
                          {"per_seed", std::move(per_seed)},
                          {"best", cell.best.ToJson()},
                          {"mean", cell.mean.ToJson()}});
  }
  doc["cells"] = std::move(cells_json);
  return doc;
}

std::string MetricsReport::Csv() const {
  std::ostringstream out;
  out.precision(10);
  out << "train_sim,eval_sim,row,seed,success_rate,avg_reward,avg_turns\n";
  for (const std::string& train : train_sims) {
    for (const std::string& eval : eval_sims) {
      const CellReport& c = cell(train, eval);
      for (size_t s = 0; s < c.per_seed.size(); ++s) {
        const EvalResult& r = c.per_seed[s];
        out << train << ',' << eval << ",seed," << s << ',' << r.success_rate << ','
            << r.avg_reward << ',' << r.avg_turns << '\n';
      }
      out << train << ',' << eval << ",best,," << c.best.success_rate << ',' << c.best.avg_reward
          << ',' << c.best.avg_turns << '\n';
      out << train << ',' << eval << ",mean,," << c.mean.success_rate << ',' << c.mean.avg_reward
          << ',' << c.mean.avg_turns << '\n';
    }
  }
  return out.str();
}

std::string MetricsReport::Table(const nlohmann::json& reference) const {
  auto upper = [](std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
  };
  const bool with_ref = reference.is_object() && !reference.empty();
  const int width = with_ref ? 36 : 16;
  char buf[128];
  std::ostringstream out;
  out << "Train \\ Eval";
  for (const std::string& eval : eval_sims) {
    std::snprintf(buf, sizeof(buf), " | %-*s", width, (upper(eval) + " reward / SR").c_str());
    out << buf;
  }
  out << '\n';
  for (const std::string& train : train_sims) {
    for (const char* row : {"best", "mean"}) {
      std::snprintf(buf, sizeof(buf), "%-12s", (upper(train) + "-" + row).c_str());
      out << buf;
      for (const std::string& eval : eval_sims) {
        const CellReport& c = cell(train, eval);
        const EvalResult& r = std::string(row) == "best" ? c.best : c.mean;
        std::snprintf(buf, sizeof(buf), " | %6.2f / %6.2f%%", r.avg_reward, r.success_rate);
        out << buf;
        if (!with_ref) continue;
        const std::string key = train + "/" + eval + "/" + row;
        if (reference.contains(key)) {
          std::snprintf(buf, sizeof(buf), " (ref %5.1f / %5.1f)",
                        reference[key].at("reward").get<double>(),
                        reference[key].at("success").get<double>());
          out << buf;
        } else {
          out << std::string(20, ' ');
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

MetricsReport CrossEvaluate(
    const std::vector<std::pair<std::string, std::vector<const PolicyLearner*>>>& policies,
    const std::vector<std::pair<std::string, UserSimulator*>>& simulators, const DialogueEnv& env,
    const GoalSampler& sampler, int n_test_dialogues, uint64_t seed) {
  MetricsReport report;
  report.n_test_dialogues = n_test_dialogues;
  for (const auto& [name, sim] : simulators) report.eval_sims.push_back(name);
  for (const auto& [train, seeds] : policies) {
    report.train_sims.push_back(train);
    for (const auto& [eval, sim] : simulators) {
      std::vector<EvalResult> per_seed;
      for (const PolicyLearner* policy : seeds) {
        per_seed.push_back(EvaluatePolicy(*policy, *sim, env, sampler, n_test_dialogues, seed));
        LOG(INFO) << train << " -> " << eval << " seed " << per_seed.size() - 1 << ": SR "
                  << per_seed.back().success_rate << " reward " << per_seed.back().avg_reward;
      }
      report.cells[{train, eval}] = SummarizeCell(std::move(per_seed));
    }
  }
  return report;
}

nlohmann::json PublishedReference() {
  auto cell = [](double reward, double success) {
    return nlohmann::json{{"reward", reward}, {"success", success}};
  };
  return {
      {"4000",
       {{"nus/nus/best", cell(13.0, 98.0)},
        {"nus/abus/best", cell(13.3, 99.8)},
        {"abus/nus/best", cell(1.53, 71.5)},
        {"abus/abus/best", cell(13.8, 99.9)},
        {"nus/nus/mean", cell(12.4, 96.6)},
        {"nus/abus/mean", cell(11.2, 94.0)},
        {"abus/nus/mean", cell(-7.6, 45.5)},
        {"abus/abus/mean", cell(13.5, 99.5)}}},
      {"1000",
       {{"nus/nus/best", cell(12.2, 95.9)},
        {"nus/abus/best", cell(13.9, 99.9)},
        {"abus/nus/best", cell(-4.0, 54.8)},
        {"abus/abus/best", cell(13.2, 99.0)},
        {"nus/nus/mean", cell(12.0, 95.4)},
        {"nus/abus/mean", cell(12.2, 97.3)},
        {"abus/nus/mean", cell(-9.48, 42.3)},
        {"abus/abus/mean", cell(12.8, 98.4)}}},
  };
}

}  // namespace usersim
