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

#ifndef USERSIM_SYSTEM_RENDERER_H_
#define USERSIM_SYSTEM_RENDERER_H_

#include <map>
#include <span>
#include <string>

#include "usersim/dialogue_acts.h"

namespace usersim {

// Surface templates for system acts. Act templates may use {name} (the venue
// name, or "it"), {pairs} (the non-name pairs rendered through
// slot_phrases and joined with ", ") and {slot}. Request and select look up
// slot_questions first.
struct RenderTemplates {
  std::map<SystemActType, std::string> acts;
  std::map<std::string, std::string> slot_phrases;    // slot -> "... {value} ..."
  std::map<std::string, std::string> slot_questions;  // slot -> question

  static RenderTemplates Default();
};

class SystemRenderer {
 public:
  explicit SystemRenderer(RenderTemplates templates = RenderTemplates::Default());

  // Throws kMissingTemplate when an act type has no template.
  std::string Render(std::span<const SystemAct> acts) const;

 private:
  std::string RenderOne(const SystemAct& act) const;
  std::string Pairs(const SystemAct& act) const;

  RenderTemplates templates_;
};

}  // namespace usersim

#endif  // USERSIM_SYSTEM_RENDERER_H_
