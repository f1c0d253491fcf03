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

#include "usersim/dialogue_acts.h"

#include <algorithm>

#include "usersim/errors.h"

namespace usersim {
namespace {

constexpr std::array<std::string_view, kNumSystemActTypes> kSystemActNames = {
    "welcomemsg", "request",  "select",   "inform",  "offer", "expl-conf",
    "impl-conf",  "canthelp", "reqmore",  "bye",     "repeat"};

constexpr std::array<std::string_view, kNumUserActTypes> kUserActNames = {
    "inform", "request", "negate", "affirm",
    "reqalts", "thankyou", "bye", "null"};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

struct RawAct {
  std::string name;
  std::vector<SlotValue> payload;
};

RawAct ParseRaw(std::string_view text) {
  text = Trim(text);
  RawAct raw;
  const size_t open = text.find('(');
  if (open == std::string_view::npos) {
    raw.name = std::string(text);
    return raw;
  }
  if (text.back() != ')') {
    throw Error(ErrorCode::kParse, "unbalanced act: " + std::string(text));
  }
  raw.name = std::string(Trim(text.substr(0, open)));
  std::string_view body = text.substr(open + 1, text.size() - open - 2);
  while (!Trim(body).empty()) {
    const size_t comma = body.find(',');
    std::string_view item = Trim(body.substr(0, comma));
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      raw.payload.push_back({std::string(item), ""});
    } else {
      raw.payload.push_back({std::string(Trim(item.substr(0, eq))),
                             std::string(Trim(item.substr(eq + 1)))});
    }
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return raw;
}

std::string Format(std::string_view name, const std::vector<SlotValue>& payload) {
  std::string out(name);
  out += '(';
  for (size_t i = 0; i < payload.size(); ++i) {
    if (i > 0) out += ',';
    out += payload[i].slot;
    if (!payload[i].value.empty()) {
      out += '=';
      out += payload[i].value;
    }
  }
  out += ')';
  return out;
}

}  // namespace

std::string_view ActName(SystemActType type) {
  return kSystemActNames[static_cast<size_t>(type)];
}

std::string_view ActName(UserActType type) {
  return kUserActNames[static_cast<size_t>(type)];
}

std::optional<SystemActType> ParseSystemActType(std::string_view name) {
  for (size_t i = 0; i < kSystemActNames.size(); ++i) {
    if (kSystemActNames[i] == name) return static_cast<SystemActType>(i);
  }
  return std::nullopt;
}

std::optional<UserActType> ParseUserActType(std::string_view name) {
  for (size_t i = 0; i < kUserActNames.size(); ++i) {
    if (kUserActNames[i] == name) return static_cast<UserActType>(i);
  }
  return std::nullopt;
}

std::optional<std::string> SystemAct::Find(std::string_view slot) const {
  for (const SlotValue& sv : payload) {
    if (sv.slot == slot) return sv.value;
  }
  return std::nullopt;
}

std::string SystemAct::ToString() const { return Format(ActName(type), payload); }
std::string UserAct::ToString() const { return Format(ActName(type), payload); }

SystemAct ParseSystemAct(std::string_view text) {
  RawAct raw = ParseRaw(text);
  auto type = ParseSystemActType(raw.name);
  if (!type) throw Error(ErrorCode::kUnknownAct, raw.name);
  return {*type, std::move(raw.payload)};
}

UserAct ParseUserAct(std::string_view text) {
  RawAct raw = ParseRaw(text);
  auto type = ParseUserActType(raw.name);
  if (!type) throw Error(ErrorCode::kUnknownAct, raw.name);
  return {*type, std::move(raw.payload)};
}

bool ContainsAct(std::span<const SystemAct> acts, SystemActType type) {
  return std::any_of(acts.begin(), acts.end(),
                     [type](const SystemAct& a) { return a.type == type; });
}

bool ContainsAct(std::span<const UserAct> acts, UserActType type) {
  return std::any_of(acts.begin(), acts.end(),
                     [type](const UserAct& a) { return a.type == type; });
}

std::string JoinActs(std::span<const SystemAct> acts) {
  std::string out;
  for (const SystemAct& a : acts) {
    if (!out.empty()) out += '|';
    out += a.ToString();
  }
  return out;
}

std::string JoinActs(std::span<const UserAct> acts) {
  std::string out;
  for (const UserAct& a : acts) {
    if (!out.empty()) out += '|';
    out += a.ToString();
  }
  return out;
}

}  // namespace usersim
