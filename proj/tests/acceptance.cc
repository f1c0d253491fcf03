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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <glog/logging.h>
#include <nlohmann/json.hpp>

#include "gradient_check.h"
#include "pipeline.h"
#include "run_config.h"
#include "test_support.h"
#include "usersim/abus.h"
#include "usersim/beam_search.h"
#include "usersim/corpus.h"
#include "usersim/dialogue_manager.h"
#include "usersim/features.h"
#include "usersim/goal.h"
#include "usersim/harness.h"
#include "usersim/nus.h"
#include "usersim/policy.h"
#include "usersim/synthesize.h"
#include "usersim/checkpoint.h"
#include "usersim/trainer.h"

namespace usersim {
namespace {

using nlohmann::json;

struct Outcome {
  enum Status { kPass, kFail, kSkip } status = kFail;
  std::string detail;
};

Outcome Check(bool ok, std::string detail) {
  return {ok ? Outcome::kPass : Outcome::kFail, std::move(detail)};
}

std::string Fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string Sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

// Shared products of the desk-scale run.
struct DeskRun {
  std::filesystem::path dir;
  json config;
  std::unique_ptr<app::Resources> resources;
  app::UserModelRun user_model;
  app::CrossEvalRun cross_eval;
};

// ------------------------------------------------------------------ 1

Outcome GoalLabelTransform() {
  const std::vector<Constraints> in = {
      {{"food", "eritrean"}},
      {{"area", "south"}, {"food", "eritrean"}},
      {{"area", "south"}, {"food", "spanish"}},
      {{"area", "south"}, {"food", "spanish"}, {"pricerange", "cheap"}},
  };
  const Constraints eritrean = {{"area", "south"}, {"food", "eritrean"}, {"pricerange", "cheap"}};
  const Constraints spanish = {{"area", "south"}, {"food", "spanish"}, {"pricerange", "cheap"}};
  const std::vector<Constraints> want = {eritrean, eritrean, spanish, spanish};
  const auto got = TransformGoalLabels(in);
  int matching = 0;
  for (size_t t = 0; t < want.size() && t < got.size(); ++t) matching += got[t] == want[t];
  return Check(got == want, std::to_string(matching) + "/4 turns match exactly");
}

// ------------------------------------------------------------------ 2

Outcome GoalPresenceFrequencies() {
  const GoalSampler sampler(testing::ToyOntology());
  Rng rng(20260101);
  const int draws = 100000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < draws; ++i) {
    const std::vector<bool> present = sampler.DrawConstraintPresence(rng);
    for (size_t s = 0; s < 3; ++s) counts[s] += present[s];
  }
  const std::vector<double> want = {0.66, 0.62, 0.58};
  bool ok = true;
  std::string detail;
  for (size_t s = 0; s < 3; ++s) {
    const double freq = static_cast<double>(counts[s]) / draws;
    ok = ok && std::abs(freq - want[s]) <= 0.01;
    detail += testing::ToyOntology().informable()[s].name + "=" + Fixed(freq, 4) + " ";
  }
  return Check(ok, detail + "(target 0.66/0.62/0.58 +-0.01, 1e5 draws)");
}

// ------------------------------------------------------------------ 3

Outcome GradientCheck() {
  const nn::Seq2SeqModel model = testing::GradientCheckModel(5);
  const auto result = testing::CheckGradients(model, testing::GradientCheckBatch(model, 6));
  std::map<std::string, double> groups;
  for (const auto& [name, error] : result.max_rel_error) {
    const std::string group = name.substr(0, name.find('.'));
    groups[group] = std::max(groups[group], error);
  }
  std::string detail;
  for (const auto& [group, error] : groups) detail += group + " " + Sci(error) + ", ";
  const bool covered = result.max_rel_error.size() == 14;
  return Check(covered && result.worst <= 1e-4,
               "max relative error " + detail + "worst " + Sci(result.worst) + " over " +
                   std::to_string(result.checked) + " parameters in " +
                   std::to_string(result.max_rel_error.size()) + " tensors");
}

// ------------------------------------------------------------------ 4

Outcome Overfit() {
  const Ontology& o = testing::ToyOntology();
  std::vector<RawDialogue> corpus;
  size_t turns = 0;
  for (RawDialogue d : SynthesizeCorpus(o, 20, 3)) {
    if (turns >= 50) break;
    if (turns + d.turns.size() > 50) d.turns.resize(50 - turns);
    turns += d.turns.size();
    corpus.push_back(std::move(d));
  }
  const TrainingSet set = BuildTrainingSet(corpus, o);
  const std::vector<nn::Example> examples = ToExamples(set.turns, set.vocab);
  nn::Seq2SeqModel model = nn::Seq2SeqModel::Create(
      static_cast<int>(FeatureExtractor(o).dimension()), 100, 100, set.vocab);
  Rng init(1);
  model.InitUniform(init, 0.08);
  nn::TrainConfig cfg;
  cfg.batch_size = 10;
  cfg.epochs = 1000000;
  cfg.max_steps = 2000;
  const nn::TrainResult result = nn::Train(model, examples, examples, cfg);
  const double loss = nn::EvaluateLoss(model, examples);
  size_t reproduced = 0;
  for (const nn::Example& ex : examples) {
    const Eigen::VectorXd p = nn::EncodeHistory(model, ex.history);
    reproduced += nn::GreedyDecode(model, p, nn::kDefaultMaxDecodeLength) == ex.target;
  }
  const double rate = static_cast<double>(reproduced) / static_cast<double>(examples.size());
  return Check(examples.size() == 50 && result.steps <= 2000 && loss < 0.05 && rate >= 0.95,
               std::to_string(examples.size()) + " turns, loss " + Fixed(loss, 4) + " nats after " +
                   std::to_string(result.steps) + " steps, greedy reproduces " +
                   std::to_string(reproduced) + "/" + std::to_string(examples.size()));
}

// ------------------------------------------------------------------ 5

Outcome FeatureDimensions() {
  const Ontology dstc2_shaped = Ontology::Parse(R"({
    "informable": {"food": ["a", "b", "c"], "area": ["d", "e"], "pricerange": ["f", "g"]},
    "requestable": ["name", "addr", "phone", "postcode", "signature"],
    "venues": [{"name": "v", "food": "a", "area": "d", "pricerange": "f", "addr": "x",
                "phone": "1", "postcode": "p", "signature": "s"}]})");
  bool ok = true;
  std::string detail;
  for (const Ontology* o : {&testing::ToyOntology(), &dstc2_shaped}) {
    const size_t n_inf = o->informable().size(), n_req = o->requestable().size();
    const size_t want = kNumSystemActTypes + 4 * n_inf + n_req + 2 * n_inf;
    const size_t got = FeatureExtractor(*o).dimension();
    ok = ok && got == want;
    detail += "dim " + std::to_string(got) + "/" + std::to_string(want) + ", ";
  }
  const json fixture = ReadJsonFile((testing::FixtureDir() / "feature_turns.json").string());
  const FeatureExtractor fx(testing::ToyOntology());
  const auto requests = fixture.at("requests").get<std::vector<std::string>>();
  ExtractorState state;
  size_t matching = 0;
  bool first = true;
  for (const json& turn : fixture.at("turns")) {
    Goal goal;
    goal.constraints = turn.at("constraints").get<Constraints>();
    goal.requests = requests;
    if (first) state = fx.InitState(goal);
    first = false;
    std::vector<SystemAct> acts;
    for (const json& a : turn.at("acts")) acts.push_back(ParseSystemAct(a.get<std::string>()));
    auto [v, next] = fx.Extract(state, acts, goal);
    matching += v.DebugString() == turn.at("expected").get<std::string>();
    state = std::move(next);
  }
  const size_t n = fixture.at("turns").size();
  ok = ok && matching == n && n > 0;
  return Check(ok, detail + "fixture turns bit-exact " + std::to_string(matching) + "/" +
                       std::to_string(n));
}

// ------------------------------------------------------------------ 6

Outcome CrossModel(DeskRun& run) {
  const auto start = std::chrono::steady_clock::now();
  run.dir = testing::TempDir("acceptance-desk");
  run.config = app::DefaultConfig();
  run.config["out_dir"] = run.dir.string();
  run.config["short_train_dialogues"] = 0;
  run.resources = app::LoadResources(run.config);
  const Ontology& o = run.resources->ontology;
  const std::vector<RawDialogue> corpus = app::ObtainCorpus(run.config, o);
  const auto log = [](const std::string& line) { LOG(INFO) << line; };
  run.user_model = app::TrainUserModel(run.config, o, corpus, log);
  run.cross_eval =
      app::RunCrossEvaluation(run.config, *run.resources, run.user_model.model, run.dir, log);
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;

  const MetricsReport& report = run.cross_eval.reports.at(4000);
  const int n_seeds = run.config.at("n_policy_seeds").get<int>();
  bool matrix = true, identity = true;
  double worst_identity = 0.0;
  const auto check_identity = [&](const EvalResult& r) {
    const double gap = std::abs(r.avg_reward - (20.0 * r.success_rate / 100.0 - r.avg_turns));
    worst_identity = std::max(worst_identity, gap);
    identity = identity && gap <= 1e-9;
  };
  for (const std::string train : {"nus", "abus"}) {
    for (const std::string eval : {"nus", "abus"}) {
      if (!report.cells.count({train, eval})) {
        matrix = false;
        continue;
      }
      const CellReport& cell = report.cell(train, eval);
      matrix = matrix && static_cast<int>(cell.per_seed.size()) == n_seeds;
      for (const EvalResult& r : cell.per_seed) {
        matrix = matrix && r.dialogues == run.config.at("n_test_dialogues").get<int>();
        check_identity(r);
      }
      check_identity(cell.best);
      check_identity(cell.mean);
    }
  }
  const double abus_abus = matrix ? report.cell("abus", "abus").mean.success_rate : 0.0;
  const double nus_nus = matrix ? report.cell("nus", "nus").mean.success_rate : 0.0;
  const std::string table = report.Table(PublishedReference().at("4000"));
  std::cout << table;
  const bool ok = abus_abus >= 90.0 && nus_nus >= 80.0 && matrix && identity && minutes <= 30.0;
  return Check(ok, "(a) ABUS->ABUS mean SR " + Fixed(abus_abus, 2) + " (b) NUS->NUS mean SR " +
                       Fixed(nus_nus, 2) + " (c) 2x2 matrix " + (matrix ? "complete" : "INCOMPLETE") +
                       " (d) max identity gap " + Sci(worst_identity) + ", " + Fixed(minutes, 1) +
                       " min");
}

// ------------------------------------------------------------------ 7

Outcome CapAndReward(const DeskRun& run) {
  size_t dialogues = 0, violations = 0;
  const auto check = [&](size_t turns, bool success, double total) {
    ++dialogues;
    if (turns > 25 || turns == 0 || std::abs(total - (20.0 * success - static_cast<double>(turns))) > 1e-9) {
      ++violations;
    }
  };
  // Every training episode of the desk run.
  for (const auto& entry : std::filesystem::directory_iterator(run.dir / "curves")) {
    std::ifstream in(entry.path());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::string episode, ret, success, turns;
      std::getline(row, episode, ',');
      std::getline(row, ret, ',');
      std::getline(row, success, ',');
      std::getline(row, turns, ',');
      check(std::stoul(turns), success == "1", std::stod(ret));
    }
  }
  // Fresh test dialogues with the trained policies and an untrained one.
  const Ontology& o = run.resources->ontology;
  const DialogueEnv env = run.resources->Env();
  const GoalSampler sampler(o, app::GoalConfigFrom(run.config));
  AgendaConfig agenda;
  agenda.pop_two_prob = run.config.at("pop_two_prob").get<double>();
  AgendaSimulator abus(o, app::GoalConfigFrom(run.config), agenda);
  NeuralSimulator nus(o, run.user_model.model, app::GoalConfigFrom(run.config),
                      app::SimulatorConfigFrom(run.config));
  std::vector<std::unique_ptr<PolicyLearner>> policies;
  for (const auto& entry : std::filesystem::directory_iterator(run.dir / "policies")) {
    policies.push_back(LoadPolicy(entry.path().string()));
  }
  const SummarySpace space(o);
  policies.push_back(MakeLearner("kernel-sarsa", space.num_states(), space.num_actions()));
  size_t capped = 0;
  for (const auto& policy : policies) {
    for (UserSimulator* sim : std::initializer_list<UserSimulator*>{&nus, &abus}) {
      EvaluatePolicy(*policy, *sim, env, sampler, 100, 99, [&](const DialogueRecord& r) {
        check(r.num_turns(), r.success, r.TotalReward());
        capped += r.num_turns() == 25;
        try {
          CheckRecordInvariants(r);
        } catch (const std::exception&) {
          ++violations;
        }
      });
    }
  }
  return Check(violations == 0 && dialogues > 40000,
               std::to_string(dialogues) + " dialogues, " + std::to_string(violations) +
                   " violations, " + std::to_string(capped) + " reached the 25-turn cap");
}

// ------------------------------------------------------------------ 8

Outcome BeamDegeneracy(const DeskRun& run) {
  const nn::Seq2SeqModel& model = run.user_model.model;
  Rng rng(808);
  int identical = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<Eigen::VectorXd> history;
    const int turns = 1 + static_cast<int>(rng.UniformIndex(6));
    for (int t = 0; t < turns; ++t) {
      history.push_back(testing::RandomBinary(model.dims.feature_dim, rng));
    }
    const Eigen::VectorXd p = nn::EncodeHistory(model, history);
    nn::ArgmaxTokenSampler argmax;
    identical += nn::GenerateBeamSample(model, p, 1, nn::kDefaultMaxDecodeLength, argmax) ==
                 nn::GreedyDecode(model, p, nn::kDefaultMaxDecodeLength);
  }
  return Check(identical == 100, std::to_string(identical) + "/100 contexts token-identical");
}

// ------------------------------------------------------------------ 9

bool Mentions(const std::string& text, const std::string& value) {
  return (" " + text + " ").find(" " + value + " ") != std::string::npos;
}

Outcome MentionRule(const DeskRun& run) {
  const Ontology& o = run.resources->ontology;
  const DialogueEnv env = run.resources->Env();
  NeuralSimulator nus(o, run.user_model.model, app::GoalConfigFrom(run.config),
                      app::SimulatorConfigFrom(run.config));
  ScriptedAgent system(o);
  int with_canthelp = 0, change_turns = 0, mentioned = 0;
  for (uint64_t i = 0; with_canthelp < 1000 && i < 1000000; ++i) {
    Rng rng = Rng(909).Split("mention", i);
    const DialogueRecord r = RunDialogue(system, nus, env, rng);
    bool canthelp = false;
    for (const TurnRecord& t : r.turns) {
      canthelp = canthelp || ContainsAct(std::span<const SystemAct>(t.system_acts),
                                         SystemActType::kCantHelp);
    }
    if (!canthelp) continue;
    ++with_canthelp;
    const auto& changes = r.final_goal.history;
    size_t k = 0;
    for (const TurnRecord& t : r.turns) {
      if (!t.goal_changed) continue;
      ++change_turns;
      if (k >= changes.size()) break;
      const Constraints& before = changes[k].previous;
      const Constraints& after =
          k + 1 < changes.size() ? changes[k + 1].previous : r.final_goal.constraints;
      ++k;
      bool ok = false;
      for (const auto& [slot, value] : after) {
        auto it = before.find(slot);
        if (it != before.end() && it->second != value && t.user.text && Mentions(*t.user.text, value)) {
          ok = true;
        }
      }
      mentioned += ok;
    }
  }
  const auto& stats = nus.stats();
  return Check(with_canthelp == 1000 && change_turns > 0 && mentioned == change_turns,
               std::to_string(with_canthelp) + " dialogues with canthelp, " +
                   std::to_string(mentioned) + "/" + std::to_string(change_turns) +
                   " post-change turns mention the new value (" +
                   std::to_string(stats.regenerations) + " regenerations, " +
                   std::to_string(stats.fallbacks) + " template fallbacks)");
}

// ----------------------------------------------------------------- 10

std::string Env(const char* name) {
  const char* v = std::getenv(name);
  return v == nullptr ? std::string() : std::string(v);
}

Outcome Dstc2Import() {
  const std::string root = Env("USERSIM_DSTC2_ROOT");
  if (root.empty()) {
    return {Outcome::kSkip, "no DSTC2 copy (set USERSIM_DSTC2_ROOT, USERSIM_DSTC2_ONTOLOGY, "
                            "USERSIM_DSTC2_TRAIN_LIST, USERSIM_DSTC2_VALID_LIST)"};
  }
  const std::string ontology_path = Env("USERSIM_DSTC2_ONTOLOGY");
  const std::string train_list = Env("USERSIM_DSTC2_TRAIN_LIST");
  const std::string valid_list = Env("USERSIM_DSTC2_VALID_LIST");
  if (ontology_path.empty() || train_list.empty() || valid_list.empty()) {
    return Check(false, "USERSIM_DSTC2_ROOT is set but the ontology or file lists are missing");
  }
  const Ontology o = Ontology::Load(ontology_path);
  const std::string corrections_path = Env("USERSIM_DSTC2_CORRECTIONS");
  const CorrectionMap corrections = corrections_path.empty()
                                        ? CorrectionMap::Load(testing::DataDir() / "corrections.txt")
                                        : CorrectionMap::Load(corrections_path);
  bool ok = true;
  std::string detail;
  const auto within = [](double got, double want) { return std::abs(got - want) <= 0.03 * want; };
  for (const auto& [name, list, want_d, want_t] :
       {std::tuple<std::string, std::string, double, double>{"train", train_list, 1609, 11638},
        {"valid", valid_list, 505, 3896}}) {
    const ImportReport report = ImportDstc2List(root, list, o, corrections);
    // No length limit, so the longest turn is measured rather than enforced.
    const TrainingSet set =
        BuildTrainingSet(report.dialogues, o, std::numeric_limits<int>::max());
    const double d = static_cast<double>(report.dialogues.size());
    const double t = static_cast<double>(set.stats.n_turns);
    ok = ok && within(d, want_d) && within(t, want_t) && set.stats.max_turn_len <= 22;
    detail += name + " " + std::to_string(report.dialogues.size()) + " dialogues / " +
              std::to_string(static_cast<size_t>(t)) + " turns, max length " +
              std::to_string(set.stats.max_turn_len) + "; ";
  }
  return Check(ok, detail);
}

int Main() {
  const std::vector<std::string> titles = {
      "",
      "goal-label transformation",
      "goal presence frequencies",
      "gradient check",
      "overfit",
      "feature dimensions and fixture",
      "desk-scale cross-model evaluation",
      "turn cap and reward",
      "beam-sample degeneracy",
      "goal-change mention rule",
      "DSTC2 import counts",
  };
  bool all_ok = true;
  const auto report = [&](int n, const std::function<Outcome()>& run) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Outcome::kFail, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* status = o.status == Outcome::kPass ? "PASS" : o.status == Outcome::kSkip ? "SKIP" : "FAIL";
    all_ok = all_ok && o.status != Outcome::kFail;
    std::cout << "criterion " << std::setw(2) << n << " " << status << "  " << titles[n] << ": "
              << o.detail << " [" << Fixed(secs, 1) << " s]" << std::endl;
  };
  report(1, GoalLabelTransform);
  report(2, GoalPresenceFrequencies);
  report(3, GradientCheck);
  report(4, Overfit);
  report(5, FeatureDimensions);
  DeskRun run;
  bool desk_ready = false;
  report(6, [&] {
    Outcome o = CrossModel(run);
    desk_ready = true;
    return o;
  });
  const auto needs_desk = [&](const std::function<Outcome(const DeskRun&)>& f) {
    return [&, f] {
      if (!desk_ready) return Check(false, "desk-scale run unavailable");
      return f(run);
    };
  };
  report(7, needs_desk(CapAndReward));
  report(8, needs_desk(BeamDegeneracy));
  report(9, needs_desk(MentionRule));
  report(10, Dstc2Import);
  return all_ok ? 0 : 1;
}

}  // namespace
}  // namespace usersim

int main(int, char** argv) {
  google::InitGoogleLogging(argv[0]);
  return usersim::Main();
}
