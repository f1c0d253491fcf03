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

#include "usersim/features.h"

#include "usersim/errors.h"

namespace usersim {
namespace {

std::string Bits(const std::vector<uint8_t>& v) {
  std::string out;
  for (uint8_t b : v) out += b ? '1' : '0';
  return out;
}

bool IsNewVenueAct(const SystemAct& act, const std::optional<std::string>& accepted,
                   std::string* name) {
  if (act.type != SystemActType::kOffer && act.type != SystemActType::kInform) return false;
  auto n = act.Find("name");
  if (!n || n->empty() || (accepted && *accepted == *n)) return false;
  *name = *n;
  return true;
}

}  // namespace

Eigen::VectorXd FeatureVector::Dense() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  Eigen::Index k = 0;
  for (const auto* group : {&a1, &a2, &r, &i, &c}) {
    for (uint8_t b : *group) out[k++] = b;
  }
  return out;
}

std::string FeatureVector::DebugString() const {
  return "a1=" + Bits(a1) + " a2=" + Bits(a2) + " r=" + Bits(r) + " i=" + Bits(i) +
         " c=" + Bits(c);
}

size_t FeatureExtractor::dimension() const {
  const size_t n_inf = ontology_.informable().size();
  return kNumSystemActTypes + 4 * n_inf + ontology_.requestable().size() + 2 * n_inf;
}

ExtractorState FeatureExtractor::InitState(const Goal& goal) const {
  ExtractorState state;
  state.initial_requests.assign(ontology_.requestable().size(), 0);
  for (const std::string& r : goal.requests) {
    const int idx = ontology_.RequestableIndex(r);
    if (idx < 0) throw Error(ErrorCode::kUnknownSlot, r);
    state.initial_requests[idx] = 1;
  }
  state.current_requests = state.initial_requests;
  return state;
}

std::pair<FeatureVector, ExtractorState> FeatureExtractor::Extract(
    const ExtractorState& state, std::span<const SystemAct> acts, const Goal& goal) const {
  if (acts.empty()) throw Error(ErrorCode::kEmptyInput, "system turn without acts");
  const size_t n_inf = ontology_.informable().size();

  FeatureVector v;
  v.a1.assign(kNumSystemActTypes, 0);
  v.a2.assign(4 * n_inf, 0);
  v.i.assign(n_inf, 0);
  v.c.assign(n_inf, 0);
  ExtractorState next = state;

  for (const SystemAct& act : acts) {
    for (const SlotValue& sv : act.payload) {
      if (sv.slot != "name" && !ontology_.IsInformable(sv.slot) &&
          !ontology_.IsRequestable(sv.slot)) {
        throw Error(ErrorCode::kUnknownSlot, act.ToString());
      }
    }
  }

  // A newly proposed venue restores the original request vector; on that turn
  // the vector is left exactly at its initial value.
  bool reset = false;
  for (const SystemAct& act : acts) {
    std::string name;
    if (IsNewVenueAct(act, next.accepted_venue, &name)) {
      next.accepted_venue = name;
      next.current_requests = next.initial_requests;
      reset = true;
    }
  }

  for (const SystemAct& act : acts) {
    v.a1[static_cast<size_t>(act.type)] = 1;
    for (const SlotValue& sv : act.payload) {
      const int inf = ontology_.InformableIndex(sv.slot);
      auto goal_value = goal.constraints.find(sv.slot);
      const bool constrained = goal_value != goal.constraints.end();
      const bool correct = constrained && goal_value->second == sv.value;
      const bool contradicts = constrained && !sv.value.empty() && goal_value->second != sv.value;
      switch (act.type) {
        case SystemActType::kRequest:
          if (inf >= 0) v.a2[static_cast<size_t>(SlotActGroup::kRequest) * n_inf + inf] = 1;
          break;
        case SystemActType::kSelect:
          if (inf >= 0) v.a2[static_cast<size_t>(SlotActGroup::kSelect) * n_inf + inf] = 1;
          break;
        case SystemActType::kInform:
        case SystemActType::kExplConf:
        case SystemActType::kImplConf:
          if (inf >= 0 && correct && act.type != SystemActType::kImplConf) {
            const auto group = act.type == SystemActType::kInform ? SlotActGroup::kInform
                                                                  : SlotActGroup::kExplConf;
            v.a2[static_cast<size_t>(group) * n_inf + inf] = 1;
          }
          if (inf >= 0 && contradicts) v.i[inf] = 1;
          break;
        default:
          break;
      }
      if (!reset && (act.type == SystemActType::kInform || act.type == SystemActType::kOffer)) {
        const int req = ontology_.RequestableIndex(sv.slot);
        if (req >= 0) next.current_requests[req] = 0;
      }
    }
  }

  for (size_t s = 0; s < n_inf; ++s) {
    v.c[s] = goal.constraints.count(ontology_.informable()[s].name) ? 1 : 0;
  }
  v.r = next.current_requests;
  return {std::move(v), std::move(next)};
}

}  // namespace usersim
