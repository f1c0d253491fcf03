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

#ifndef USERSIM_USER_SIMULATOR_H_
#define USERSIM_USER_SIMULATOR_H_

#include <span>
#include <string_view>

#include "usersim/dialogue_acts.h"
#include "usersim/dialogue_record.h"
#include "usersim/goal.h"
#include "usersim/rng.h"

namespace usersim {

// A simulated user: reset with a goal, then answer one system turn at a time.
class UserSimulator {
 public:
  virtual ~UserSimulator() = default;

  // Samples a fresh goal and clears all per-dialogue state.
  virtual void Reset(Rng& rng) = 0;
  // Same, with a caller-supplied goal.
  virtual void ResetWithGoal(const Goal& goal, Rng& rng) = 0;
  // Throws kInvalidState before the first reset.
  virtual UserOutput Respond(std::span<const SystemAct> acts, Rng& rng) = 0;

  virtual const Goal& goal() const = 0;
  // True when the last Respond changed the goal.
  virtual bool goal_changed() const = 0;
  virtual std::string_view name() const = 0;
};

}  // namespace usersim

#endif  // USERSIM_USER_SIMULATOR_H_
