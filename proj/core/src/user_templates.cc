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

#include "usersim/user_templates.h"

#include "usersim/errors.h"

namespace usersim {
namespace {

std::string Key(const UserAct& act) {
  std::string key(ActName(act.type));
  if (act.payload.empty()) return key;
  const SlotValue& sv = act.payload.front();
  key += ':';
  key += sv.slot;
  if (act.type == UserActType::kInform && sv.value == kDontCare) key += ":dontcare";
  return key;
}

void ReplaceAll(std::string& s, std::string_view from, std::string_view to) {
  for (size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

}  // namespace

UserTemplates UserTemplates::Default() {
  return UserTemplates({
      {"inform:food",
       {"{value} food", "i want {value} food", "im looking for {value} food",
        "a restaurant serving {value} food", "i would like {value} food"}},
      {"inform:area",
       {"in the {value}", "the {value} part of town", "somewhere in the {value}", "{value}"}},
      {"inform:pricerange",
       {"{value}", "a {value} restaurant", "in the {value} price range",
        "i want something {value}"}},
      {"inform:food:dontcare", {"any kind of food", "i dont care about the food"}},
      {"inform:area:dontcare", {"any area", "any part of town", "i dont care about the area"}},
      {"inform:pricerange:dontcare", {"any price range", "i dont care about the price"}},
      {"inform", {"{value}"}},
      {"request:phone",
       {"whats the phone number", "what is the phone number", "can i have the phone number"}},
      {"request:addr", {"whats the address", "what is the address", "can i get the address"}},
      {"request:postcode", {"whats the post code", "what is the postcode"}},
      {"request:name", {"what is it called", "whats the name of it"}},
      {"request", {"whats the {slot}"}},
      {"negate", {"no"}},
      {"affirm", {"yes", "yeah"}},
      {"reqalts", {"is there anything else", "how about another one"}},
      {"thankyou", {"thank you"}},
      {"bye", {"thank you goodbye", "goodbye", "bye"}},
      {"null", {""}},
  });
}

UserTemplates::UserTemplates(std::map<std::string, std::vector<std::string>> variants)
    : variants_(std::move(variants)) {}

const std::vector<std::string>& UserTemplates::VariantsFor(const UserAct& act) const {
  auto it = variants_.find(Key(act));
  if (it == variants_.end()) it = variants_.find(std::string(ActName(act.type)));
  if (it == variants_.end() || it->second.empty()) {
    throw Error(ErrorCode::kMissingTemplate, act.ToString());
  }
  return it->second;
}

size_t UserTemplates::NumVariants(const UserAct& act) const { return VariantsFor(act).size(); }

std::string UserTemplates::RenderVariant(const UserAct& act, size_t variant) const {
  const auto& variants = VariantsFor(act);
  std::string text = variants[variant % variants.size()];
  if (!act.payload.empty()) {
    ReplaceAll(text, "{value}", act.payload.front().value);
    ReplaceAll(text, "{slot}", act.payload.front().slot);
  }
  return text;
}

std::string UserTemplates::Render(std::span<const UserAct> acts, Rng* rng) const {
  std::string out;
  for (const UserAct& act : acts) {
    const size_t variant = rng ? rng->UniformIndex(NumVariants(act)) : 0;
    std::string piece = RenderVariant(act, variant);
    if (piece.empty()) continue;
    if (!out.empty()) out += ' ';
    out += piece;
  }
  return out;
}

}  // namespace usersim
