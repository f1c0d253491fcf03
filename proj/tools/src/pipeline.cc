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


#include "pipeline.h"

#include <chrono>
#include <sstream>

#include "run_config.h"
#include "usersim/abus.h"
#include "usersim/checkpoint.h"
#include "usersim/errors.h"
#include "usersim/features.h"
#include "usersim/nus.h"
#include "usersim/policy.h"
#include "usersim/synthesize.h"

namespace usersim::app {

using nlohmann::json;

namespace {

void Say(const Logger& log, const std::string& line) {
  if (log) log(line);
}

double Since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::unique_ptr<Resources> LoadResources(const json& config) {
  auto res = std::make_unique<Resources>();
  res->ontology = Ontology::Load(DataPath(config, "ontology", "toy_ontology.json"));
  res->decoder = std::make_unique<SemanticDecoder>(SemanticDecoder::Load(
      res->ontology, DataPath(config, "decoder_rules", "decoder_rules.txt")));
  res->cached_decoder = std::make_unique<CachingDecoder>(*res->decoder);
  return res;
}

std::vector<RawDialogue> ObtainCorpus(const json& config, const Ontology& ontology) {
  const std::string path = config.at("corpus").get<std::string>();
  if (!path.empty()) return LoadCorpus(path);
  SynthesisConfig synth;
  synth.goals = GoalConfigFrom(config);
  synth.agenda.pop_two_prob = config.at("pop_two_prob").get<double>();
  return SynthesizeCorpus(ontology, config.at("n_synth_dialogues").get<int>(),
                          config.at("seed").get<uint64_t>(), synth);
}

ImportReport ImportDstc2Corpus(const json& config, const Ontology& ontology) {
  const std::string root = config.at("dstc2_root").get<std::string>();
  const CorrectionMap corrections =
      CorrectionMap::Load(DataPath(config, "corrections", "corrections.txt"));
  const std::string list = config.at("dstc2_file_list").get<std::string>();
  if (list.empty()) return ImportDstc2(root, ontology, corrections);
  return ImportDstc2List(root, list, ontology, corrections);
}

UserModelRun TrainUserModel(const json& config, const Ontology& ontology,
                            std::span<const RawDialogue> corpus, const Logger& log) {
  const int max_len = config.at("max_turn_tokens").get<int>();
  auto [train, valid] = SplitByDialogue(corpus, config.at("train_fraction").get<double>(),
                                        config.at("seed").get<uint64_t>());
  const TrainingSet train_set = BuildTrainingSet(train, ontology, max_len);
  const TrainingSet valid_set = BuildTrainingSet(valid, ontology, max_len);
  const std::vector<nn::Example> train_ex = ToExamples(train_set.turns, train_set.vocab);
  const std::vector<nn::Example> valid_ex = ToExamples(valid_set.turns, train_set.vocab);
  Say(log, "training set " + train_set.stats.ToJson().dump());

  const nn::TrainConfig train_config = TrainConfigFrom(config);
  UserModelRun run;
  run.model = nn::Seq2SeqModel::Create(static_cast<int>(FeatureExtractor(ontology).dimension()),
                                       train_config.hidden, train_config.bridge, train_set.vocab);
  Rng init = Rng(train_config.seed).Split("init", 0);
  run.model.InitUniform(init, train_config.init_scale);
  run.result = nn::Train(run.model, train_ex, valid_ex, train_config, [&](const nn::EpochLog& e) {
    std::ostringstream line;
    line << "epoch " << e.epoch << " steps " << e.steps << " train " << e.train_loss << " valid "
         << e.valid_loss;
    Say(log, line.str());
  });
  run.train_stats = train_set.stats;
  run.valid_stats = valid_set.stats;
  return run;
}

nn::Seq2SeqModel ObtainUserModel(const json& config, const Ontology& ontology,
                                 const std::filesystem::path& run_dir, const Logger& log) {
  const std::string path = config.at("model").get<std::string>();
  if (!path.empty()) return LoadModel(path);
  const std::filesystem::path saved = run_dir / "user_model.json";
  if (std::filesystem::exists(saved)) {
    Say(log, "reusing " + saved.string());
    return LoadModel(saved.string());
  }
  const std::vector<RawDialogue> corpus = ObtainCorpus(config, ontology);
  UserModelRun run = TrainUserModel(config, ontology, corpus, log);
  WriteTextFile((run_dir / "loss_curve.csv").string(), nn::LossCurveCsv(run.result));
  SaveModel(saved.string(), run.model, TrainConfigFrom(config).ToJson());
  return std::move(run.model);
}

uint64_t PolicySeed(const json& config, int index) {
  return Rng(config.at("seed").get<uint64_t>()).Split("policy-seed", index).NextU64();
}

uint64_t TestSeed(const json& config) {
  return Rng(config.at("seed").get<uint64_t>()).Split("test-seed", 0).NextU64();
}

CrossEvalRun RunCrossEvaluation(const json& config, const Resources& resources,
                                const nn::Seq2SeqModel& model,
                                const std::filesystem::path& run_dir, const Logger& log) {
  const Ontology& ontology = resources.ontology;
  const DialogueEnv env = resources.Env();
  const GoalSamplerConfig goals = GoalConfigFrom(config);
  AgendaConfig agenda;
  agenda.pop_two_prob = config.at("pop_two_prob").get<double>();
  AgendaSimulator abus(ontology, goals, agenda);
  NeuralSimulator nus(ontology, model, goals, SimulatorConfigFrom(config));
  const std::vector<std::pair<std::string, UserSimulator*>> sims = {{"nus", &nus},
                                                                    {"abus", &abus}};
  const GoalSampler sampler(ontology, goals);
  const int n_seeds = config.at("n_policy_seeds").get<int>();
  const int n_test = config.at("n_test_dialogues").get<int>();
  if (n_seeds < 1) throw Error(ErrorCode::kConfig, "n_policy_seeds must be >= 1");

  std::vector<int> lengths = {config.at("n_train_dialogues").get<int>()};
  const int short_len = config.at("short_train_dialogues").get<int>();
  if (short_len > 0 && short_len != lengths.front()) lengths.push_back(short_len);

  CrossEvalRun out;
  for (int length : lengths) {
    const std::string tag = std::to_string(length);
    std::vector<std::unique_ptr<PolicyLearner>> owned;
    std::vector<std::pair<std::string, std::vector<const PolicyLearner*>>> policies;
    const auto train_start = std::chrono::steady_clock::now();
    for (const auto& [sim_name, sim] : sims) {
      std::vector<const PolicyLearner*> trained;
      for (int k = 0; k < n_seeds; ++k) {
        PolicyTrainConfig pc = PolicyConfigFrom(config, PolicySeed(config, k));
        pc.n_dialogues = length;
        PolicyTrainResult r = TrainPolicy(*sim, env, pc);
        const std::string stem = sim_name + "-" + tag + "-seed" + std::to_string(k);
        SavePolicy((run_dir / "policies" / (stem + ".json")).string(), *r.policy);
        WriteTextFile((run_dir / "curves" / (stem + ".csv")).string(), CurveCsv(r.curve));
        std::ostringstream line;
        line << "trained " << stem << " trailing-500 SR " << TrailingSuccessRate(r.curve, 500);
        Say(log, line.str());
        trained.push_back(r.policy.get());
        owned.push_back(std::move(r.policy));
      }
      policies.emplace_back(sim_name, std::move(trained));
    }
    out.seconds["train-" + tag] = Since(train_start);
    const auto eval_start = std::chrono::steady_clock::now();
    MetricsReport report = CrossEvaluate(policies, sims, env, sampler, n_test, TestSeed(config));
    out.seconds["eval-" + tag] = Since(eval_start);
    const json reference = PublishedReference().value(tag, json());
    const std::string table = report.Table(reference);
    WriteJsonFile((run_dir / ("report-" + tag + ".json")).string(), report.ToJson(), 2);
    WriteTextFile((run_dir / ("report-" + tag + ".csv")).string(), report.Csv());
    WriteTextFile((run_dir / ("table-" + tag + ".txt")).string(), table);
    Say(log, "policies trained for " + tag + " dialogues\n" + table);
    out.reports.emplace(length, std::move(report));
  }
  return out;
}

}  // namespace usersim::app
