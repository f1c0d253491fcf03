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


#ifndef USERSIM_TOOLS_SESSION_SERVICE_H_
#define USERSIM_TOOLS_SESSION_SERVICE_H_

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/dialogue_manager.h"
#include "usersim/dialogue_record.h"
#include "usersim/goal.h"
#include "usersim/ontology.h"
#include "usersim/policy.h"
#include "usersim/semantic_decoder.h"
#include "usersim/system_renderer.h"

namespace usersim::app {

struct NamedPolicy {
  std::string id;
  std::unique_ptr<PolicyLearner> policy;
};

struct ServiceOptions {
  uint64_t seed = 1;
  GoalSamplerConfig goals;
  bool achievable_goals = true;
  int max_turns = kMaxDialogueTurns;
  // JSONL event log; empty keeps sessions in memory only.
  std::string log_path;
};

struct ServiceReply {
  int status = 200;
  nlohmann::json body;
};

enum class SessionStatus { kOpen, kEnded, kJudged };

// Human evaluation sessions. Each session talks to one policy, picked by
// cycling through random permutations of the policies. Every event is
// appended to the log and replayed when the service starts again.
class SessionService {
 public:
  SessionService(const Ontology& ontology, const SemanticDecoder& decoder,
                 const SystemRenderer& renderer, std::vector<NamedPolicy> policies,
                 ServiceOptions options);

  // {session_id, policy, goal: {constraints, requests}, goal_text, system_text}
  ServiceReply Open();
  // body {user_text} -> {system_text, ended}
  ServiceReply Turn(const std::string& session_id, std::string_view body);
  // body {success} -> {stored: true}
  ServiceReply Judge(const std::string& session_id, std::string_view body);
  ServiceReply Report() const;

  size_t num_sessions() const;
  size_t replayed_events() const { return replayed_; }
  // Completed, judged record of a session, if any.
  std::optional<DialogueRecord> JudgedRecord(const std::string& session_id) const;

 private:
  struct Session {
    std::string id;
    size_t policy = 0;
    uint64_t index = 0;
    std::unique_ptr<PolicyAgent> agent;
    DialogueRecord record;
    SessionStatus status = SessionStatus::kOpen;
    bool goal_satisfied = false;
    std::mutex mu;
  };

  size_t AssignPolicy(uint64_t index) const;
  std::shared_ptr<Session> Find(const std::string& id) const;
  std::shared_ptr<Session> StartSession(uint64_t index, const std::string& id, size_t policy,
                                        const Goal& goal);
  nlohmann::json ApplyTurn(Session& session, const std::string& user_text);
  void ApplyJudge(Session& session, bool success);
  void Append(const nlohmann::json& event);
  void Replay();

  const Ontology& ontology_;
  const SemanticDecoder& decoder_;
  const SystemRenderer& renderer_;
  std::vector<NamedPolicy> policies_;
  ServiceOptions options_;
  GoalSampler sampler_;

  mutable std::mutex mu_;  // guards sessions_, next_index_ and the log
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  uint64_t next_index_ = 0;
  std::ofstream log_;
  size_t replayed_ = 0;
};

}  // namespace usersim::app

#endif  // USERSIM_TOOLS_SESSION_SERVICE_H_
