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

#ifndef USERSIM_FEATURES_H_
#define USERSIM_FEATURES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "usersim/dialogue_acts.h"
#include "usersim/goal.h"
#include "usersim/ontology.h"

namespace usersim {

// Value-independent embedding of one system turn, v = [a1 a2 r i c].
//
//   a1  which system act types are present (binary, several may be set)
//   a2  four groups of one bit per informable slot: request, select,
//       inform with the correct value, expl-conf with the correct value
//   r   requested slots not yet informed for the current venue
//   i   informable slots the system just mentioned with a value that
//       contradicts the goal (inform, expl-conf, impl-conf)
//   c   informable slots present in the goal's constraints
struct FeatureVector {
  std::vector<uint8_t> a1;
  std::vector<uint8_t> a2;
  std::vector<uint8_t> r;
  std::vector<uint8_t> i;
  std::vector<uint8_t> c;

  size_t size() const { return a1.size() + a2.size() + r.size() + i.size() + c.size(); }
  Eigen::VectorXd Dense() const;
  // "a1=... a2=... r=... i=... c=..." with each group as a bit string.
  std::string DebugString() const;
  bool operator==(const FeatureVector&) const = default;
};

enum class SlotActGroup { kRequest = 0, kSelect = 1, kInform = 2, kExplConf = 3 };

struct ExtractorState {
  std::vector<uint8_t> current_requests;
  std::vector<uint8_t> initial_requests;
  std::optional<std::string> accepted_venue;

  bool operator==(const ExtractorState&) const = default;
};

class FeatureExtractor {
 public:
  explicit FeatureExtractor(const Ontology& ontology) : ontology_(ontology) {}

  // |v| = act types + 4 * informable + requestable + 2 * informable.
  size_t dimension() const;

  ExtractorState InitState(const Goal& goal) const;

  // acts must be non-empty; slots must belong to the ontology ("name" is
  // always accepted). Pure: the input state is not modified.
  std::pair<FeatureVector, ExtractorState> Extract(const ExtractorState& state,
                                                   std::span<const SystemAct> acts,
                                                   const Goal& goal) const;

  const Ontology& ontology() const { return ontology_; }

 private:
  const Ontology& ontology_;
};

}  // namespace usersim

#endif  // USERSIM_FEATURES_H_
