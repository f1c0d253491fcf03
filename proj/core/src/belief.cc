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

#include "usersim/belief.h"

#include <algorithm>

namespace usersim {

BeliefState UpdateBelief(const BeliefState& belief, std::span<const UserAct> acts,
                         const Ontology& ontology) {
  BeliefState next = belief;
  next.last_user_acts.clear();
  for (const UserAct& act : acts) {
    next.last_user_acts.push_back(act.type);
    switch (act.type) {
      case UserActType::kInform:
        for (const SlotValue& sv : act.payload) {
          if (ontology.IsInformable(sv.slot)) next.slots[sv.slot] = sv.value;
        }
        break;
      case UserActType::kRequest:
        for (const SlotValue& sv : act.payload) {
          if (ontology.IsRequestable(sv.slot) &&
              std::find(next.outstanding.begin(), next.outstanding.end(), sv.slot) ==
                  next.outstanding.end()) {
            next.outstanding.push_back(sv.slot);
          }
        }
        break;
      case UserActType::kReqAlts:
        if (next.offered) {
          next.rejected.insert(*next.offered);
          next.offered.reset();
        }
        break;
      case UserActType::kBye:
        next.user_bye = true;
        break;
      default:
        break;
    }
  }
  if (next.offered && !OfferValid(next, ontology)) next.offered.reset();
  return next;
}

BeliefState ApplySystemActs(const BeliefState& belief, std::span<const SystemAct> acts) {
  BeliefState next = belief;
  for (const SystemAct& act : acts) {
    if (act.type != SystemActType::kOffer && act.type != SystemActType::kInform) continue;
    if (auto name = act.Find("name"); name && !name->empty()) next.offered = *name;
    if (!next.offered) continue;
    for (const SlotValue& sv : act.payload) {
      next.outstanding.erase(std::remove(next.outstanding.begin(), next.outstanding.end(), sv.slot),
                             next.outstanding.end());
    }
  }
  return next;
}

size_t MatchingVenues(const BeliefState& belief, const Ontology& ontology) {
  return ontology.CountVenues(belief.slots);
}

bool OfferValid(const BeliefState& belief, const Ontology& ontology) {
  if (!belief.offered) return false;
  const Venue* venue = ontology.FindVenue(*belief.offered);
  return venue != nullptr && Ontology::Matches(*venue, belief.slots);
}

}  // namespace usersim
