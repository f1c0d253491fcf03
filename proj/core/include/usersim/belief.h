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

#ifndef USERSIM_BELIEF_H_
#define USERSIM_BELIEF_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "usersim/dialogue_acts.h"
#include "usersim/ontology.h"

namespace usersim {

// Rule-based tracker over decoded user acts.
struct BeliefState {
  Constraints slots;                     // latest informed value per slot
  std::vector<std::string> outstanding;  // requested, not yet answered
  std::optional<std::string> offered;    // venue under discussion
  std::set<std::string> rejected;
  std::vector<UserActType> last_user_acts;
  bool user_bye = false;

  bool operator==(const BeliefState&) const = default;
};

// inform overwrites (latest wins), request adds to the outstanding list,
// reqalts rejects the offered venue, everything else only shows up in
// last_user_acts. A value change that invalidates the offered venue drops
// the offer.
BeliefState UpdateBelief(const BeliefState& belief, std::span<const UserAct> acts,
                         const Ontology& ontology);

// Bookkeeping for what the system said: offers set the venue under
// discussion, informs for it answer outstanding requests.
BeliefState ApplySystemActs(const BeliefState& belief, std::span<const SystemAct> acts);

// Venues matching the belief's slot values.
size_t MatchingVenues(const BeliefState& belief, const Ontology& ontology);
// True when a venue is offered and still matches the belief.
bool OfferValid(const BeliefState& belief, const Ontology& ontology);

}  // namespace usersim

#endif  // USERSIM_BELIEF_H_
