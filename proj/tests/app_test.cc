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


#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "commands.h"
#include "http_server.h"
#include "run_config.h"
#include "session_service.h"
#include "test_support.h"
#include "usersim/checkpoint.h"
#include "usersim/dialogue_manager.h"
#include "usersim/errors.h"
#include "usersim/policy.h"
#include "usersim/system_renderer.h"

// Must follow the Eigen headers.
#include <httplib.h>

namespace usersim::app {
namespace {

using nlohmann::json;
using usersim::testing::TempDir;
using usersim::testing::ToyDecoder;
using usersim::testing::ToyOntology;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "usersim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path OnlyRunDir(const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> dirs;
  for (const auto& e : std::filesystem::directory_iterator(out_dir)) dirs.push_back(e.path());
  EXPECT_EQ(dirs.size(), 1u);
  return dirs.empty() ? out_dir : dirs.front();
}

// ------------------------------------------------------------- Config

TEST(RunConfigTest, DefaultsAndFlagNames) {
  const json d = DefaultConfig();
  EXPECT_EQ(d.size(), ConfigKeys().size());
  EXPECT_EQ(d.at("n_train_dialogues"), 4000);
  EXPECT_EQ(d.at("n_test_dialogues"), 1000);
  EXPECT_EQ(d.at("n_policy_seeds"), 5);
  EXPECT_EQ(d.at("max_turn_tokens"), 22);
  EXPECT_EQ(FlagName("learning_rate"), "--learning-rate");
}

TEST(RunConfigTest, FileAndOverridesResolve) {
  const auto dir = TempDir("config");
  const std::string path = (dir / "run.json").string();
  WriteTextFile(path, R"({"seed": 9, "epochs": 3, "simulator": "nus"})");
  const json c = ResolveConfig(path, {{"epochs", "5"}, {"constraint_probs", R"({"food": 1.0})"},
                                      {"policies", "a.json,b.json"}, {"achievable_goals", "false"}});
  EXPECT_EQ(c.at("seed"), 9);
  EXPECT_EQ(c.at("epochs"), 5);
  EXPECT_EQ(c.at("simulator"), "nus");
  EXPECT_EQ(c.at("constraint_probs").at("food"), 1.0);
  EXPECT_EQ(c.at("policies"), json::array({"a.json", "b.json"}));
  EXPECT_EQ(c.at("achievable_goals"), false);
  EXPECT_EQ(c.at("hidden"), 100);
}

TEST(RunConfigTest, RejectsUnknownKeysAndBadValues) {
  const auto dir = TempDir("config-bad");
  const std::string path = (dir / "run.json").string();
  WriteTextFile(path, R"({"sed": 9})");
  try {
    ResolveConfig(path, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
  EXPECT_THROW(ResolveConfig("", {{"epochs", "many"}}), Error);
  EXPECT_THROW(ResolveConfig("", {{"epochs", "1.5"}}), Error);
  EXPECT_THROW(ResolveConfig((dir / "missing.json").string(), {}), Error);
}

TEST(RunConfigTest, HashIgnoresOutputDirectory) {
  json a = DefaultConfig(), b = DefaultConfig();
  b["out_dir"] = "elsewhere";
  EXPECT_EQ(ConfigHash(a), ConfigHash(b));
  b["seed"] = 2;
  EXPECT_NE(ConfigHash(a), ConfigHash(b));
  EXPECT_EQ(RunDir(a), std::filesystem::path("runs") / ("run-" + ConfigHash(a)));
}

// ---------------------------------------------------------------- CLI

TEST(CliTest, UsageErrorsExitTwo) {
  const CliResult unknown = Cli({"frobnicate"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("unknown subcommand 'frobnicate'"), std::string::npos);
  EXPECT_NE(unknown.err.find("train-us"), std::string::npos);
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"train-us", "--epochs", "lots"}).code, 2);
  EXPECT_EQ(Cli({"train-us", "--no-such-flag", "1"}).code, 2);
  const CliResult nus = Cli({"train-policy", "--simulator", "nus", "--out-dir",
                             TempDir("cli-nus").string()});
  EXPECT_EQ(nus.code, 2);
  EXPECT_NE(nus.err.find("model"), std::string::npos);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

std::vector<std::string> TinyTrainFlags(const std::filesystem::path& out_dir) {
  return {"train-us",   "--seed",  "7", "--n-synth-dialogues", "40", "--epochs", "2",
          "--hidden",   "8",       "--bridge", "8", "--out-dir", out_dir.string()};
}

TEST(CliTest, TrainUserModelTwiceGivesIdenticalCheckpoints) {
  const auto a = TempDir("cli-train-a"), b = TempDir("cli-train-b");
  const CliResult ra = Cli(TinyTrainFlags(a));
  ASSERT_EQ(ra.code, 0) << ra.err;
  const CliResult rb = Cli(TinyTrainFlags(b));
  ASSERT_EQ(rb.code, 0) << rb.err;
  const auto da = OnlyRunDir(a), db = OnlyRunDir(b);
  EXPECT_EQ(da.filename(), db.filename());
  EXPECT_EQ(ReadTextFile((da / "user_model.json").string()),
            ReadTextFile((db / "user_model.json").string()));
  EXPECT_EQ(ReadTextFile((da / "loss_curve.csv").string()),
            ReadTextFile((db / "loss_curve.csv").string()));
  EXPECT_TRUE(std::filesystem::exists(da / "corpus_stats.json"));
  const json config = ReadJsonFile((da / "config.json").string());
  EXPECT_EQ(config.at("seed"), 7);
  EXPECT_EQ(config.at("epochs"), 2);
  const nn::Seq2SeqModel model = LoadModel((da / "user_model.json").string());
  EXPECT_EQ(model.dims.hidden, 8);
}

TEST(CliTest, TrainPolicyThenChat) {
  const auto out_dir = TempDir("cli-policy");
  const CliResult r = Cli({"train-policy", "--simulator", "abus", "--n-train-dialogues", "60",
                           "--out-dir", out_dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto run = OnlyRunDir(out_dir);
  ASSERT_TRUE(std::filesystem::exists(run / "policy.json"));
  EXPECT_EQ(ReadTextFile((run / "curve.csv").string()).rfind("episode,", 0), 0u);
  const CliResult chat = Cli({"chat", "--policy", (run / "policy.json").string()},
                             "i want cheap food\nthank you goodbye\ny\n");
  ASSERT_EQ(chat.code, 0) << chat.err;
  EXPECT_NE(chat.out.find("your goal:"), std::string::npos);
  EXPECT_NE(chat.out.find("system:"), std::string::npos);
  EXPECT_NE(chat.out.find("successful? [y/n]"), std::string::npos);
  EXPECT_NE(chat.out.find("reward "), std::string::npos);
}

// ----------------------------------------------------- Session service

std::vector<NamedPolicy> Policies(int n) {
  const SummarySpace space(ToyOntology());
  std::vector<NamedPolicy> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"p" + std::to_string(i),
                   MakeLearner("kernel-sarsa", space.num_states(), space.num_actions())});
  }
  return out;
}

struct Service {
  SystemRenderer renderer;
  std::unique_ptr<SessionService> service;
  explicit Service(ServiceOptions options, int n_policies = 2) {
    service = std::make_unique<SessionService>(ToyOntology(), ToyDecoder(), renderer,
                                               Policies(n_policies), options);
  }
};

std::string TurnBody(const std::string& text) { return json{{"user_text", text}}.dump(); }

TEST(SessionServiceTest, OpenReturnsAchievableGoalAndGreeting) {
  Service s({});
  for (int i = 0; i < 20; ++i) {
    const ServiceReply open = s.service->Open();
    ASSERT_EQ(open.status, 200);
    const json& b = open.body;
    EXPECT_FALSE(b.at("session_id").get<std::string>().empty());
    EXPECT_FALSE(b.at("system_text").get<std::string>().empty());
    EXPECT_FALSE(b.at("goal_text").get<std::string>().empty());
    const Constraints c = b.at("goal").at("constraints").get<Constraints>();
    EXPECT_FALSE(ToyOntology().QueryVenues(c).empty());
    EXPECT_FALSE(b.at("goal").at("requests").empty());
  }
  EXPECT_EQ(s.service->num_sessions(), 20u);
}

TEST(SessionServiceTest, PoliciesAreAssignedInShuffledBlocks) {
  Service s({}, 3);
  for (int block = 0; block < 5; ++block) {
    std::set<std::string> seen;
    for (int k = 0; k < 3; ++k) seen.insert(s.service->Open().body.at("policy").get<std::string>());
    EXPECT_EQ(seen.size(), 3u);
  }
}

TEST(SessionServiceTest, StatusCodes) {
  Service s({});
  EXPECT_EQ(s.service->Turn("nope", TurnBody("hi")).status, 404);
  EXPECT_EQ(s.service->Judge("nope", R"({"success": true})").status, 404);
  const std::string id = s.service->Open().body.at("session_id");
  EXPECT_EQ(s.service->Turn(id, "not json").status, 400);
  EXPECT_EQ(s.service->Turn(id, R"({"text": "hi"})").status, 400);
  EXPECT_EQ(s.service->Judge(id, R"({"success": true})").status, 409);
  const ServiceReply turn = s.service->Turn(id, TurnBody("im looking for cheap food"));
  ASSERT_EQ(turn.status, 200);
  EXPECT_FALSE(turn.body.at("ended").get<bool>());
  EXPECT_TRUE(turn.body.at("system_text").is_string());
  const ServiceReply bye = s.service->Turn(id, TurnBody("thank you goodbye"));
  ASSERT_EQ(bye.status, 200);
  EXPECT_TRUE(bye.body.at("ended").get<bool>());
  EXPECT_EQ(s.service->Turn(id, TurnBody("hello again")).status, 409);
  EXPECT_EQ(s.service->Judge(id, R"({"verdict": 1})").status, 400);
  const ServiceReply judged = s.service->Judge(id, R"({"success": true})");
  ASSERT_EQ(judged.status, 200);
  EXPECT_EQ(judged.body, (json{{"stored", true}}));
  EXPECT_EQ(s.service->Judge(id, R"({"success": false})").status, 409);

  const auto record = s.service->JudgedRecord(id);
  ASSERT_TRUE(record.has_value());
  CheckRecordInvariants(*record);
  EXPECT_TRUE(record->success);
  EXPECT_EQ(record->num_turns(), 2u);
  EXPECT_DOUBLE_EQ(record->TotalReward(), 18.0);
  EXPECT_DOUBLE_EQ(record->turns.back().reward, 19.0);
}

TEST(SessionServiceTest, TurnCapEndsSession) {
  ServiceOptions options;
  options.max_turns = 3;
  Service s(options);
  const std::string id = s.service->Open().body.at("session_id");
  EXPECT_FALSE(s.service->Turn(id, TurnBody("hello")).body.at("ended").get<bool>());
  EXPECT_FALSE(s.service->Turn(id, TurnBody("hello")).body.at("ended").get<bool>());
  EXPECT_TRUE(s.service->Turn(id, TurnBody("hello")).body.at("ended").get<bool>());
  ASSERT_EQ(s.service->Judge(id, R"({"success": false})").status, 200);
  EXPECT_DOUBLE_EQ(s.service->JudgedRecord(id)->TotalReward(), -3.0);
}

TEST(SessionServiceTest, ReportAggregatesVerdicts) {
  Service s({}, 1);
  for (bool success : {true, false, true}) {
    const std::string id = s.service->Open().body.at("session_id");
    s.service->Turn(id, TurnBody("goodbye"));
    ASSERT_EQ(s.service->Judge(id, json{{"success", success}}.dump()).status, 200);
  }
  s.service->Open();
  const json report = s.service->Report().body;
  EXPECT_EQ(report.at("judged"), 3);
  const json& row = report.at("policies").at(0);
  EXPECT_EQ(row.at("policy"), "p0");
  EXPECT_EQ(row.at("sessions"), 4);
  EXPECT_EQ(row.at("judged"), 3);
  EXPECT_NEAR(row.at("success_rate").get<double>(), 200.0 / 3, 1e-9);
  EXPECT_NEAR(row.at("avg_reward").get<double>(), (19.0 - 1.0 + 19.0) / 3, 1e-9);
  EXPECT_NEAR(row.at("avg_turns").get<double>(), 1.0, 1e-12);
}

TEST(SessionServiceTest, SurvivesRestart) {
  const auto dir = TempDir("sessions");
  ServiceOptions options;
  options.seed = 3;
  options.log_path = (dir / "sessions.jsonl").string();
  std::string judged_id, open_id;
  json report, record;
  {
    Service s(options);
    judged_id = s.service->Open().body.at("session_id");
    s.service->Turn(judged_id, TurnBody("i want chinese food"));
    s.service->Turn(judged_id, TurnBody("bye"));
    s.service->Judge(judged_id, R"({"success": true})");
    open_id = s.service->Open().body.at("session_id");
    s.service->Turn(open_id, TurnBody("something in the north"));
    report = s.service->Report().body;
    record = RecordToJson(*s.service->JudgedRecord(judged_id));
  }
  Service restarted(options);
  EXPECT_EQ(restarted.service->num_sessions(), 2u);
  EXPECT_GT(restarted.service->replayed_events(), 0u);
  EXPECT_EQ(restarted.service->Report().body, report);
  EXPECT_EQ(RecordToJson(*restarted.service->JudgedRecord(judged_id)), record);
  EXPECT_EQ(restarted.service->Judge(judged_id, R"({"success": true})").status, 409);
  const ServiceReply more = restarted.service->Turn(open_id, TurnBody("goodbye"));
  EXPECT_EQ(more.status, 200);
  EXPECT_TRUE(more.body.at("ended").get<bool>());
  const std::string fresh = restarted.service->Open().body.at("session_id");
  EXPECT_NE(fresh, judged_id);
  EXPECT_NE(fresh, open_id);
}

// --------------------------------------------------------------- HTTP

TEST(HttpServerTest, WireProtocol) {
  Service s({});
  httplib::Server server;
  RegisterRoutes(server, *s.service);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);

  const auto open = client.Post("/api/session", "", "application/json");
  ASSERT_TRUE(open);
  EXPECT_EQ(open->status, 200);
  const json session = json::parse(open->body);
  const std::string id = session.at("session_id");
  EXPECT_TRUE(session.at("goal").contains("constraints"));
  EXPECT_TRUE(session.at("goal").contains("requests"));
  EXPECT_TRUE(session.at("system_text").is_string());

  const auto turn = client.Post("/api/session/" + id + "/turn", TurnBody("im looking for cheap food"),
                                "application/json");
  ASSERT_TRUE(turn);
  EXPECT_EQ(turn->status, 200);
  const json reply = json::parse(turn->body);
  EXPECT_TRUE(reply.at("system_text").is_string());
  EXPECT_FALSE(reply.at("ended").get<bool>());

  EXPECT_EQ(client.Post("/api/session/unknown/turn", TurnBody("hi"), "application/json")->status, 404);
  EXPECT_EQ(client.Post("/api/session/" + id + "/turn", "{", "application/json")->status, 400);
  EXPECT_EQ(client.Post("/api/session/" + id + "/judge", R"({"success": true})", "application/json")
                ->status,
            409);
  client.Post("/api/session/" + id + "/turn", TurnBody("goodbye"), "application/json");
  const auto judge =
      client.Post("/api/session/" + id + "/judge", R"({"success": true})", "application/json");
  ASSERT_TRUE(judge);
  EXPECT_EQ(judge->status, 200);
  EXPECT_EQ(json::parse(judge->body), (json{{"stored", true}}));

  const auto report = client.Get("/api/report");
  ASSERT_TRUE(report);
  EXPECT_EQ(report->status, 200);
  EXPECT_EQ(json::parse(report->body).at("judged"), 1);
  EXPECT_EQ(report->get_header_value("Content-Type"), "application/json");

  server.stop();
  thread.join();
}

}  // namespace
}  // namespace usersim::app
