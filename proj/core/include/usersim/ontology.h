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

#ifndef USERSIM_ONTOLOGY_H_
#define USERSIM_ONTOLOGY_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "usersim/dialogue_acts.h"

namespace usersim {

struct InformableSlot {
  std::string name;
  std::vector<std::string> values;
};

struct Venue {
  std::string name;
  // One value per informable and per requestable slot (except "name").
  std::map<std::string, std::string> attributes;

  // Attribute lookup that also resolves the "name" slot.
  const std::string& Get(std::string_view slot) const;
};

// Slots, values and the venue database a dialogue can talk about. Slot and
// value order is the document order and is relied on for feature indices,
// so an Ontology is never reordered after loading.
class Ontology {
 public:
  static Ontology FromJson(const nlohmann::json& doc);
  static Ontology Parse(std::string_view text);
  static Ontology Load(const std::filesystem::path& path);

  const std::vector<InformableSlot>& informable() const { return informable_; }
  const std::vector<std::string>& requestable() const { return requestable_; }
  const std::vector<Venue>& venues() const { return venues_; }

  // -1 when the slot is not of that kind.
  int InformableIndex(std::string_view slot) const;
  int RequestableIndex(std::string_view slot) const;
  bool IsInformable(std::string_view slot) const { return InformableIndex(slot) >= 0; }
  bool IsRequestable(std::string_view slot) const { return RequestableIndex(slot) >= 0; }
  bool IsValue(std::string_view slot, std::string_view value) const;

  const InformableSlot& Slot(std::string_view slot) const;
  const Venue* FindVenue(std::string_view name) const;

  // Venues matching every constraint, in database order. kDontCare matches
  // anything. Throws kUnknownSlot for non-informable constraint slots.
  std::vector<const Venue*> QueryVenues(const Constraints& constraints) const;
  size_t CountVenues(const Constraints& constraints) const;

  static bool Matches(const Venue& venue, const Constraints& constraints);

  nlohmann::json ToJson() const;

 private:
  std::vector<InformableSlot> informable_;
  std::vector<std::string> requestable_;
  std::vector<Venue> venues_;
  std::map<std::string, int, std::less<>> informable_index_;
  std::map<std::string, int, std::less<>> requestable_index_;
};

}  // namespace usersim

#endif  // USERSIM_ONTOLOGY_H_
