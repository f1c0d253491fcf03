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

#ifndef USERSIM_USER_TEMPLATES_H_
#define USERSIM_USER_TEMPLATES_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "usersim/dialogue_acts.h"
#include "usersim/rng.h"

namespace usersim {

// Surface forms for user acts. Used to give the agenda-based simulator a
// voice when synthesizing corpora and as the fallback for the neural
// simulator's goal-change mention rule.
//
// Keys: "inform:<slot>", "inform:<slot>:dontcare", "request:<slot>", and the
// bare act name for payload-free acts. "{value}" and "{slot}" are replaced.
class UserTemplates {
 public:
  static UserTemplates Default();

  explicit UserTemplates(std::map<std::string, std::vector<std::string>> variants);

  size_t NumVariants(const UserAct& act) const;
  std::string RenderVariant(const UserAct& act, size_t variant) const;

  // Renders every act (a random variant each when rng is given, else the
  // first) and joins them with single spaces.
  std::string Render(std::span<const UserAct> acts, Rng* rng) const;

 private:
  const std::vector<std::string>& VariantsFor(const UserAct& act) const;

  std::map<std::string, std::vector<std::string>> variants_;
};

}  // namespace usersim

#endif  // USERSIM_USER_TEMPLATES_H_
