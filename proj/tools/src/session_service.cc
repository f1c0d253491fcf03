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


#include "session_service.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include <glog/logging.h>

#include "usersim/errors.h"
#include "usersim/rng.h"

namespace usersim::app {

using nlohmann::json;

namespace {

ServiceReply ErrorReply(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

std::string SessionId(uint64_t seed, uint64_t index) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Rng(seed).Split("session-id", index).NextU64()));
  return buf;
}

json GoalView(const Goal& goal) {
  return {{"constraints", goal.constraints}, {"requests", goal.requests}};
}

}  // namespace

SessionService::SessionService(const Ontology& ontology, const SemanticDecoder& decoder,
                               const SystemRenderer& renderer, std::vector<NamedPolicy> policies,
                               ServiceOptions options)
    : ontology_(ontology),
      decoder_(decoder),
      renderer_(renderer),
      policies_(std::move(policies)),
      options_(std::move(options)),
      sampler_(ontology, [&] {
        GoalSamplerConfig goals = options_.goals;
        goals.achievable_only = options_.achievable_goals;
        return goals;
      }()) {
  if (policies_.empty()) throw Error(ErrorCode::kConfig, "the service needs at least one policy");
  if (!options_.log_path.empty()) {
    Replay();
    const auto parent = std::filesystem::path(options_.log_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    log_.open(options_.log_path, std::ios::app);
    if (!log_) throw Error(ErrorCode::kIo, "cannot open session log " + options_.log_path);
  }
}

size_t SessionService::AssignPolicy(uint64_t index) const {
  const size_t n = policies_.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng(options_.seed).Split("assign", index / n);
  for (size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.UniformIndex(i)]);
  return order[index % n];
}

std::shared_ptr<SessionService::Session> SessionService::Find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<SessionService::Session> SessionService::StartSession(uint64_t index,
                                                                      const std::string& id,
                                                                      size_t policy,
                                                                      const Goal& goal) {
  auto session = std::make_shared<Session>();
  session->id = id;
  session->index = index;
  session->policy = policy;
  session->agent = std::make_unique<PolicyAgent>(ontology_, *policies_[policy].policy, 0.0);
  session->record.seed = index;
  session->record.simulator = "human";
  session->record.initial_goal = goal;
  session->record.final_goal = goal;
  TurnRecord first;
  first.system_acts = session->agent->Begin();
  first.system_text = renderer_.Render(first.system_acts);
  session->record.turns.push_back(std::move(first));
  sessions_[id] = session;
  next_index_ = std::max(next_index_, index + 1);
  return session;
}

ServiceReply SessionService::Open() {
  std::lock_guard<std::mutex> lock(mu_);
  const uint64_t index = next_index_;
  std::string id = SessionId(options_.seed, index);
  while (sessions_.count(id)) id += "x";
  const size_t policy = AssignPolicy(index);
  Rng rng = Rng(options_.seed).Split("session-goal", index);
  const Goal goal = sampler_.Sample(rng);
  auto session = StartSession(index, id, policy, goal);
  if (log_.is_open()) {
    log_ << json{{"event", "open"}, {"session_id", id}, {"index", index},
                 {"policy", policies_[policy].id}, {"goal", GoalToJson(goal)}}
                .dump()
         << '\n'
         << std::flush;
  }
  return {200,
          {{"session_id", id},
           {"policy", policies_[policy].id},
           {"goal", GoalView(goal)},
           {"goal_text", DescribeGoal(goal)},
           {"system_text", session->record.turns.front().system_text}}};
}

json SessionService::ApplyTurn(Session& session, const std::string& user_text) {
  DialogueRecord& record = session.record;
  TurnRecord& current = record.turns.back();
  current.user = UserOutput::Text(user_text);
  current.decoded = decoder_.Parse(user_text);
  const std::vector<UserAct> decoded = current.decoded;
  if (ContainsAct(std::span<const UserAct>(decoded), UserActType::kBye) ||
      static_cast<int>(record.turns.size()) >= options_.max_turns) {
    session.status = SessionStatus::kEnded;
    return {{"system_text", ""}, {"ended", true}};
  }
  Rng rng = Rng(options_.seed).Split("session-turn", session.index).Split(record.turns.size());
  std::optional<Decision> decision;
  TurnRecord next;
  next.system_acts = session.agent->Respond(decoded, rng, &decision);
  next.decision = decision;
  next.system_text = renderer_.Render(next.system_acts);
  const bool system_bye = ContainsAct(std::span<const SystemAct>(next.system_acts),
                                      SystemActType::kBye);
  const std::string text = next.system_text;
  record.turns.push_back(std::move(next));
  if (system_bye) session.status = SessionStatus::kEnded;
  return {{"system_text", text}, {"ended", session.status == SessionStatus::kEnded}};
}

void SessionService::ApplyJudge(Session& session, bool success) {
  session.goal_satisfied = GoalSatisfied(session.record.final_goal, session.record, ontology_);
  FinalizeRecord(session.record, success);
  CheckRecordInvariants(session.record);
  session.status = SessionStatus::kJudged;
}

ServiceReply SessionService::Turn(const std::string& session_id, std::string_view body) {
  auto session = Find(session_id);
  if (!session) return ErrorReply(404, "unknown session " + session_id);
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("user_text") ||
      !doc["user_text"].is_string()) {
    return ErrorReply(400, "expected {\"user_text\": string}");
  }
  const std::string text = doc["user_text"].get<std::string>();
  std::lock_guard<std::mutex> lock(session->mu);
  if (session->status != SessionStatus::kOpen) return ErrorReply(409, "session has ended");
  json reply = ApplyTurn(*session, text);
  Append({{"event", "turn"}, {"session_id", session_id}, {"user_text", text}});
  return {200, reply};
}

ServiceReply SessionService::Judge(const std::string& session_id, std::string_view body) {
  auto session = Find(session_id);
  if (!session) return ErrorReply(404, "unknown session " + session_id);
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("success") ||
      !doc["success"].is_boolean()) {
    return ErrorReply(400, "expected {\"success\": boolean}");
  }
  std::lock_guard<std::mutex> lock(session->mu);
  if (session->status == SessionStatus::kOpen) return ErrorReply(409, "session has not ended");
  if (session->status == SessionStatus::kJudged) return ErrorReply(409, "session already judged");
  ApplyJudge(*session, doc["success"].get<bool>());
  Append({{"event", "judge"},
          {"session_id", session_id},
          {"success", session->record.success},
          {"goal_satisfied", session->goal_satisfied},
          {"record", RecordToJson(session->record)}});
  return {200, {{"stored", true}}};
}

ServiceReply SessionService::Report() const {
  struct Totals {
    int sessions = 0, judged = 0, successes = 0, satisfied = 0;
    double reward = 0.0, turns = 0.0;
  };
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& [id, s] : sessions_) all.push_back(s);
  }
  std::vector<Totals> totals(policies_.size());
  for (const auto& s : all) {
    std::lock_guard<std::mutex> lock(s->mu);
    Totals& t = totals[s->policy];
    ++t.sessions;
    if (s->status != SessionStatus::kJudged) continue;
    ++t.judged;
    t.successes += s->record.success ? 1 : 0;
    t.satisfied += s->goal_satisfied ? 1 : 0;
    t.reward += s->record.TotalReward();
    t.turns += static_cast<double>(s->record.num_turns());
  }
  json rows = json::array();
  int judged = 0;
  for (size_t p = 0; p < policies_.size(); ++p) {
    const Totals& t = totals[p];
    judged += t.judged;
    const double n = std::max(1, t.judged);
    rows.push_back({{"policy", policies_[p].id},
                    {"sessions", t.sessions},
                    {"judged", t.judged},
                    {"success_rate", 100.0 * t.successes / n},
                    {"avg_reward", t.reward / n},
                    {"avg_turns", t.turns / n},
                    {"goal_satisfied_rate", 100.0 * t.satisfied / n}});
  }
  return {200, {{"policies", rows}, {"judged", judged}}};
}

size_t SessionService::num_sessions() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sessions_.size();
}

std::optional<DialogueRecord> SessionService::JudgedRecord(const std::string& session_id) const {
  auto session = Find(session_id);
  if (!session) return std::nullopt;
  std::lock_guard<std::mutex> lock(session->mu);
  if (session->status != SessionStatus::kJudged) return std::nullopt;
  return session->record;
}

void SessionService::Append(const json& event) {
  std::lock_guard<std::mutex> lock(mu_);
  if (log_.is_open()) log_ << event.dump() << '\n' << std::flush;
}

void SessionService::Replay() {
  std::ifstream in(options_.log_path);
  if (!in) return;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json event = json::parse(line, nullptr, false);
    if (event.is_discarded() || !event.is_object()) {
      LOG(WARNING) << options_.log_path << ":" << line_no << ": skipping unreadable event";
      continue;
    }
    const std::string type = event.value("event", "");
    const std::string id = event.value("session_id", "");
    if (type == "open") {
      const std::string policy_id = event.at("policy").get<std::string>();
      auto it = std::find_if(policies_.begin(), policies_.end(),
                             [&](const NamedPolicy& p) { return p.id == policy_id; });
      if (it == policies_.end()) {
        throw Error(ErrorCode::kConfig, "session log refers to unloaded policy " + policy_id);
      }
      StartSession(event.at("index").get<uint64_t>(), id,
                   static_cast<size_t>(it - policies_.begin()), GoalFromJson(event.at("goal")));
    } else if (type == "turn" || type == "judge") {
      auto it = sessions_.find(id);
      if (it == sessions_.end()) {
        LOG(WARNING) << options_.log_path << ":" << line_no << ": event for unknown session";
        continue;
      }
      if (type == "turn") {
        ApplyTurn(*it->second, event.at("user_text").get<std::string>());
      } else {
        ApplyJudge(*it->second, event.at("success").get<bool>());
      }
    }
    ++replayed_;
  }
}

}  // namespace usersim::app
