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


#include "commands.h"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <glog/logging.h>

#include "http_server.h"
#include "pipeline.h"
#include "run_config.h"
#include "session_service.h"
#include "usersim/abus.h"
#include "usersim/checkpoint.h"
#include "usersim/errors.h"
#include "usersim/nus.h"
#include "usersim/policy.h"

// Must follow the Eigen headers.
#include <httplib.h>

namespace usersim::app {

using nlohmann::json;

namespace {

struct Invocation {
  std::string config_path;
  std::map<std::string, std::string> flags;
};

std::filesystem::path PrepareRunDir(const json& config, std::ostream& out) {
  const std::filesystem::path dir = RunDir(config);
  std::filesystem::create_directories(dir);
  WriteJsonFile((dir / "config.json").string(), config, 2);
  out << "run directory " << dir.string() << "\n";
  return dir;
}

Logger StreamLogger(std::ostream& out) {
  return [&out](const std::string& line) { out << line << "\n" << std::flush; };
}

int PrepareData(const json& config, std::ostream& out) {
  const auto dir = PrepareRunDir(config, out);
  const auto res = LoadResources(config);
  std::vector<RawDialogue> corpus;
  if (!config.at("dstc2_root").get<std::string>().empty()) {
    ImportReport report = ImportDstc2Corpus(config, res->ontology);
    out << "imported " << report.dialogues.size() << " of " << report.calls << " calls, "
        << report.discarded << " discarded, " << report.dropped_slots << " slots dropped\n";
    corpus = std::move(report.dialogues);
  } else {
    corpus = ObtainCorpus(config, res->ontology);
  }
  const TrainingSet set =
      BuildTrainingSet(corpus, res->ontology, config.at("max_turn_tokens").get<int>());
  SaveCorpus((dir / "corpus.json").string(), corpus);
  WriteJsonFile((dir / "corpus_stats.json").string(), set.stats.ToJson(), 2);
  out << "corpus stats " << set.stats.ToJson().dump() << "\n";
  return 0;
}

int SynthCorpus(const json& config, std::ostream& out) {
  const auto dir = PrepareRunDir(config, out);
  const auto res = LoadResources(config);
  json synth_config = config;
  synth_config["corpus"] = "";
  const std::vector<RawDialogue> corpus = ObtainCorpus(synth_config, res->ontology);
  SaveCorpus((dir / "corpus.json").string(), corpus);
  out << "wrote " << corpus.size() << " dialogues to " << (dir / "corpus.json").string() << "\n";
  return 0;
}

int TrainUs(const json& config, std::ostream& out) {
  const auto dir = PrepareRunDir(config, out);
  const auto res = LoadResources(config);
  const std::vector<RawDialogue> corpus = ObtainCorpus(config, res->ontology);
  UserModelRun run = TrainUserModel(config, res->ontology, corpus, StreamLogger(out));
  SaveModel((dir / "user_model.json").string(), run.model, TrainConfigFrom(config).ToJson());
  WriteTextFile((dir / "loss_curve.csv").string(), nn::LossCurveCsv(run.result));
  WriteJsonFile((dir / "corpus_stats.json").string(),
                {{"train", run.train_stats.ToJson()}, {"valid", run.valid_stats.ToJson()}}, 2);
  out << "best epoch " << run.result.best_epoch << " valid loss " << run.result.best_valid_loss
      << "\n";
  return 0;
}

int TrainPolicyCommand(const json& config, std::ostream& out) {
  const std::string sim_name = config.at("simulator").get<std::string>();
  if (sim_name != "abus" && sim_name != "nus") {
    throw Error(ErrorCode::kConfig, "simulator must be abus or nus");
  }
  if (sim_name == "nus" && config.at("model").get<std::string>().empty()) {
    throw Error(ErrorCode::kConfig, "the nus simulator needs a trained --model checkpoint");
  }
  const auto dir = PrepareRunDir(config, out);
  const auto res = LoadResources(config);
  const GoalSamplerConfig goals = GoalConfigFrom(config);
  std::unique_ptr<UserSimulator> sim;
  nn::Seq2SeqModel model;
  if (sim_name == "nus") {
    model = LoadModel(config.at("model").get<std::string>());
    sim = std::make_unique<NeuralSimulator>(res->ontology, model, goals,
                                            SimulatorConfigFrom(config));
  } else {
    AgendaConfig agenda;
    agenda.pop_two_prob = config.at("pop_two_prob").get<double>();
    sim = std::make_unique<AgendaSimulator>(res->ontology, goals, agenda);
  }
  const PolicyTrainResult r =
      TrainPolicy(*sim, res->Env(), PolicyConfigFrom(config, config.at("seed").get<uint64_t>()));
  SavePolicy((dir / "policy.json").string(), *r.policy);
  WriteTextFile((dir / "curve.csv").string(), CurveCsv(r.curve));
  out << "trained on " << sim_name << " for " << r.curve.size()
      << " dialogues, trailing-500 SR " << TrailingSuccessRate(r.curve, 500) << "\n";
  return 0;
}

int CrossEval(const json& config, std::ostream& out) {
  const auto dir = PrepareRunDir(config, out);
  const auto res = LoadResources(config);
  const Logger log = StreamLogger(out);
  const nn::Seq2SeqModel model = ObtainUserModel(config, res->ontology, dir, log);
  RunCrossEvaluation(config, *res, model, dir, log);
  return 0;
}

std::vector<NamedPolicy> LoadPolicies(const std::vector<std::string>& paths) {
  if (paths.empty()) throw Error(ErrorCode::kConfig, "no policy checkpoints given");
  std::vector<NamedPolicy> policies;
  for (const std::string& path : paths) {
    policies.push_back({std::filesystem::path(path).stem().string(), LoadPolicy(path)});
  }
  return policies;
}

ServiceOptions ServiceOptionsFrom(const json& config) {
  ServiceOptions options;
  options.seed = config.at("seed").get<uint64_t>();
  options.goals = GoalConfigFrom(config);
  options.achievable_goals = config.at("achievable_goals").get<bool>();
  return options;
}

int Serve(const json& config, std::ostream& out) {
  const auto dir = PrepareRunDir(config, out);
  const auto res = LoadResources(config);
  ServiceOptions options = ServiceOptionsFrom(config);
  options.log_path = config.at("session_log").get<std::string>();
  if (options.log_path.empty()) options.log_path = (dir / "sessions.jsonl").string();
  SessionService service(res->ontology, *res->decoder, res->renderer,
                         LoadPolicies(config.at("policies").get<std::vector<std::string>>()),
                         options);
  httplib::Server server;
  RegisterRoutes(server, service, config.at("static_dir").get<std::string>());
  const std::string host = config.at("host").get<std::string>();
  const int port = config.at("port").get<int>();
  out << "replayed " << service.replayed_events() << " events from " << options.log_path << "\n"
      << "listening on http://" << host << ":" << port << "\n"
      << std::flush;
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return 0;
}

int Chat(const json& config, std::istream& in, std::ostream& out) {
  const std::string policy = config.at("policy").get<std::string>();
  if (policy.empty()) throw Error(ErrorCode::kConfig, "chat needs a --policy checkpoint");
  const auto res = LoadResources(config);
  SessionService service(res->ontology, *res->decoder, res->renderer, LoadPolicies({policy}),
                         ServiceOptionsFrom(config));
  const ServiceReply open = service.Open();
  const std::string id = open.body.at("session_id").get<std::string>();
  out << "your goal: " << open.body.at("goal_text").get<std::string>() << "\n"
      << "system: " << open.body.at("system_text").get<std::string>() << "\n";
  std::string line;
  bool ended = false;
  while (!ended && (out << "you: " << std::flush) && std::getline(in, line)) {
    const ServiceReply reply = service.Turn(id, json{{"user_text", line}}.dump());
    ended = reply.body.at("ended").get<bool>();
    const std::string text = reply.body.at("system_text").get<std::string>();
    if (!text.empty()) out << "system: " << text << "\n";
  }
  if (!ended) {
    out << "\n";
    return 0;
  }
  out << "was the dialogue successful? [y/n] " << std::flush;
  const bool success = std::getline(in, line) && !line.empty() && (line[0] == 'y' || line[0] == 'Y');
  service.Judge(id, json{{"success", success}}.dump());
  const json row = service.Report().body.at("policies").at(0);
  out << "reward " << row.at("avg_reward").get<double>() << "\n";
  return 0;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Neural and agenda-based user simulators for dialogue policy training"};
  app.name("usersim");
  app.require_subcommand(1, 1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"prepare-data", "import DSTC2 or synthesize a corpus and report its statistics"},
      {"synth-corpus", "synthesize a corpus with the agenda-based simulator"},
      {"train-us", "train the neural user simulator"},
      {"train-policy", "train a dialogue policy against one simulator"},
      {"cross-eval", "train policies on both simulators and test each on both"},
      {"serve", "run the human evaluation HTTP service"},
      {"chat", "talk to a policy in the terminal"},
  };
  std::map<std::string, Invocation> invocations;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    Invocation& inv = invocations[name];
    sub->add_option("--config", inv.config_path, "JSON run configuration");
    for (const ConfigKey& key : ConfigKeys()) {
      sub->add_option(FlagName(key.key), inv.flags[key.key], key.help);
    }
  }
  if (argc > 1 && argv[1][0] != '-' &&
      std::none_of(commands.begin(), commands.end(),
                   [&](const auto& c) { return c.first == argv[1]; })) {
    err << "usersim: unknown subcommand '" << argv[1] << "'\n" << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usersim: " << e.what() << "\n" << app.help();
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Invocation& inv = invocations[name];
  std::map<std::string, std::string> overrides;
  for (const ConfigKey& key : ConfigKeys()) {
    if (sub->count(FlagName(key.key)) > 0) overrides[key.key] = inv.flags[key.key];
  }
  try {
    const json config = ResolveConfig(inv.config_path, overrides);
    if (name == "prepare-data") return PrepareData(config, out);
    if (name == "synth-corpus") return SynthCorpus(config, out);
    if (name == "train-us") return TrainUs(config, out);
    if (name == "train-policy") return TrainPolicyCommand(config, out);
    if (name == "cross-eval") return CrossEval(config, out);
    if (name == "serve") return Serve(config, out);
    return Chat(config, in, out);
  } catch (const Error& e) {
    err << "usersim " << name << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kConfig ? 2 : 1;
  } catch (const std::exception& e) {
    err << "usersim " << name << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace usersim::app
