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

#include "usersim/system_renderer.h"

#include "usersim/errors.h"

namespace usersim {
namespace {

void ReplaceAll(std::string& s, std::string_view from, std::string_view to) {
  for (size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string Squeeze(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out += c;
  }
  ReplaceAll(out, " .", ".");
  ReplaceAll(out, " ,", ",");
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace

RenderTemplates RenderTemplates::Default() {
  RenderTemplates t;
  using T = SystemActType;
  t.acts = {
      {T::kWelcomeMsg, "hello, welcome to the restaurant system. how may i help you?"},
      {T::kRequest, "what {slot} would you like?"},
      {T::kSelect, "could you tell me more about the {slot}?"},
      {T::kInform, "{name} is {pairs}."},
      {T::kOffer, "{name} is a nice restaurant {pairs}."},
      {T::kExplConf, "you are looking for a restaurant {pairs}, right?"},
      {T::kImplConf, "ok, a restaurant {pairs}."},
      {T::kCantHelp, "i am sorry but there is no restaurant {pairs}."},
      {T::kReqMore, "can i help you with anything else?"},
      {T::kBye, "thank you for using this system. goodbye."},
      {T::kRepeat, "could you please repeat that?"},
  };
  t.slot_phrases = {
      {"food", "serving {value} food"},
      {"area", "in the {value} part of town"},
      {"pricerange", "in the {value} price range"},
      {"phone", "reachable on {value}"},
      {"addr", "located at {value}"},
      {"postcode", "with the post code {value}"},
  };
  t.slot_questions = {
      {"food", "what kind of food would you like?"},
      {"area", "what part of town do you have in mind?"},
      {"pricerange", "what price range would you like?"},
  };
  return t;
}

SystemRenderer::SystemRenderer(RenderTemplates templates) : templates_(std::move(templates)) {}

std::string SystemRenderer::Pairs(const SystemAct& act) const {
  std::string out;
  for (const SlotValue& sv : act.payload) {
    if (sv.slot == "name") continue;
    std::string phrase;
    auto it = templates_.slot_phrases.find(sv.slot);
    phrase = it != templates_.slot_phrases.end() ? it->second : "with " + sv.slot + " {value}";
    ReplaceAll(phrase, "{value}", sv.value == kDontCare ? "any" : sv.value);
    if (!out.empty()) out += ", ";
    out += phrase;
  }
  return out;
}

std::string SystemRenderer::RenderOne(const SystemAct& act) const {
  const std::string slot = act.payload.empty() ? "" : act.payload.front().slot;
  if ((act.type == SystemActType::kRequest || act.type == SystemActType::kSelect) &&
      templates_.slot_questions.count(slot)) {
    return templates_.slot_questions.at(slot);
  }
  auto it = templates_.acts.find(act.type);
  if (it == templates_.acts.end()) {
    throw Error(ErrorCode::kMissingTemplate, std::string(ActName(act.type)));
  }
  std::string text = it->second;
  ReplaceAll(text, "{name}", act.Find("name").value_or("it"));
  ReplaceAll(text, "{pairs}", Pairs(act));
  ReplaceAll(text, "{slot}", slot);
  return Squeeze(text);
}

std::string SystemRenderer::Render(std::span<const SystemAct> acts) const {
  std::string out;
  for (const SystemAct& act : acts) {
    if (!out.empty()) out += ' ';
    out += RenderOne(act);
  }
  return out;
}

}  // namespace usersim
