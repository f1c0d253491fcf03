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

#include "usersim/ontology.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "usersim/errors.h"

namespace usersim {

using nlohmann::json;

const std::string& Venue::Get(std::string_view slot) const {
  if (slot == "name") return name;
  auto it = attributes.find(std::string(slot));
  if (it == attributes.end()) {
    throw Error(ErrorCode::kUnknownSlot, "venue " + name + " has no " + std::string(slot));
  }
  return it->second;
}

Ontology Ontology::FromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("informable") || !doc.contains("requestable") ||
      !doc.contains("venues")) {
    throw Error(ErrorCode::kParse, "ontology needs informable, requestable and venues");
  }
  Ontology onto;
  // nlohmann::json sorts object keys; "informable_order" carries the document
  // order when the caller has it (Parse() always does).
  const json& informable = doc.at("informable");
  if (!informable.is_object()) throw Error(ErrorCode::kParse, "informable must be an object");
  std::vector<std::string> order;
  if (doc.contains("informable_order")) {
    order = doc.at("informable_order").get<std::vector<std::string>>();
  } else {
    for (auto it = informable.begin(); it != informable.end(); ++it) order.push_back(it.key());
  }
  for (const std::string& slot : order) {
    if (onto.informable_index_.count(slot)) throw Error(ErrorCode::kDuplicateSlot, slot);
    if (!informable.contains(slot)) throw Error(ErrorCode::kParse, "missing slot " + slot);
    InformableSlot s{slot, informable.at(slot).get<std::vector<std::string>>()};
    if (s.values.empty()) throw Error(ErrorCode::kParse, "slot " + slot + " has no values");
    std::set<std::string> seen;
    for (const std::string& v : s.values) {
      if (v == kDontCare) throw Error(ErrorCode::kParse, "dontcare is implicit for " + slot);
      if (!seen.insert(v).second) throw Error(ErrorCode::kParse, "duplicate value " + v);
    }
    onto.informable_index_[slot] = static_cast<int>(onto.informable_.size());
    onto.informable_.push_back(std::move(s));
  }
  for (const std::string& slot : doc.at("requestable").get<std::vector<std::string>>()) {
    if (onto.requestable_index_.count(slot) || onto.informable_index_.count(slot)) {
      throw Error(ErrorCode::kDuplicateSlot, slot);
    }
    onto.requestable_index_[slot] = static_cast<int>(onto.requestable_.size());
    onto.requestable_.push_back(slot);
  }
  std::set<std::string> names;
  for (const json& v : doc.at("venues")) {
    Venue venue;
    venue.name = v.at("name").get<std::string>();
    if (!names.insert(venue.name).second) {
      throw Error(ErrorCode::kParse, "duplicate venue " + venue.name);
    }
    for (const InformableSlot& s : onto.informable_) {
      if (!v.contains(s.name)) {
        throw Error(ErrorCode::kParse, "venue " + venue.name + " lacks " + s.name);
      }
      std::string value = v.at(s.name).get<std::string>();
      if (std::find(s.values.begin(), s.values.end(), value) == s.values.end()) {
        throw Error(ErrorCode::kUnknownValue, venue.name + ": " + s.name + "=" + value);
      }
      venue.attributes[s.name] = std::move(value);
    }
    for (const std::string& r : onto.requestable_) {
      if (r == "name") continue;
      if (!v.contains(r)) throw Error(ErrorCode::kParse, "venue " + venue.name + " lacks " + r);
      venue.attributes[r] = v.at(r).get<std::string>();
    }
    onto.venues_.push_back(std::move(venue));
  }
  return onto;
}

Ontology Ontology::Parse(std::string_view text) {
  // Informable slot order is significant, and JSON readers drop both key
  // order and duplicate keys, so the informable block is watched while parsing.
  using Event = json::parse_event_t;
  std::vector<std::string> order;
  std::string duplicate;
  std::string last_top_key;
  bool in_informable = false;
  json::parser_callback_t watch = [&](int depth, Event event, json& parsed) {
    if (event == Event::key && depth == 1) {
      last_top_key = parsed.get<std::string>();
    } else if (event == Event::object_start && depth == 1) {
      in_informable = last_top_key == "informable";
    } else if (event == Event::object_end && depth == 1) {
      in_informable = false;
    } else if (event == Event::key && depth == 2 && in_informable) {
      std::string slot = parsed.get<std::string>();
      if (std::find(order.begin(), order.end(), slot) != order.end()) {
        duplicate = slot;
      } else {
        order.push_back(std::move(slot));
      }
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(text, watch);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  if (!duplicate.empty()) throw Error(ErrorCode::kDuplicateSlot, duplicate);
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "ontology must be an object");
  doc["informable_order"] = order;
  try {
    return FromJson(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

Ontology Ontology::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

int Ontology::InformableIndex(std::string_view slot) const {
  auto it = informable_index_.find(slot);
  return it == informable_index_.end() ? -1 : it->second;
}

int Ontology::RequestableIndex(std::string_view slot) const {
  auto it = requestable_index_.find(slot);
  return it == requestable_index_.end() ? -1 : it->second;
}

bool Ontology::IsValue(std::string_view slot, std::string_view value) const {
  const int i = InformableIndex(slot);
  if (i < 0) return false;
  if (value == kDontCare) return true;
  const auto& values = informable_[i].values;
  return std::find(values.begin(), values.end(), value) != values.end();
}

const InformableSlot& Ontology::Slot(std::string_view slot) const {
  const int i = InformableIndex(slot);
  if (i < 0) throw Error(ErrorCode::kUnknownSlot, std::string(slot));
  return informable_[i];
}

const Venue* Ontology::FindVenue(std::string_view name) const {
  for (const Venue& v : venues_) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool Ontology::Matches(const Venue& venue, const Constraints& constraints) {
  for (const auto& [slot, value] : constraints) {
    if (value == kDontCare) continue;
    auto it = venue.attributes.find(slot);
    if (it == venue.attributes.end() || it->second != value) return false;
  }
  return true;
}

std::vector<const Venue*> Ontology::QueryVenues(const Constraints& constraints) const {
  for (const auto& [slot, value] : constraints) {
    if (!IsInformable(slot)) throw Error(ErrorCode::kUnknownSlot, slot);
  }
  std::vector<const Venue*> out;
  for (const Venue& v : venues_) {
    if (Matches(v, constraints)) out.push_back(&v);
  }
  return out;
}

size_t Ontology::CountVenues(const Constraints& constraints) const {
  size_t n = 0;
  for (const Venue& v : venues_) n += Matches(v, constraints) ? 1 : 0;
  return n;
}

json Ontology::ToJson() const {
  json doc;
  json informable = json::object();
  std::vector<std::string> order;
  for (const InformableSlot& s : informable_) {
    informable[s.name] = s.values;
    order.push_back(s.name);
  }
  doc["informable"] = informable;
  doc["informable_order"] = order;
  doc["requestable"] = requestable_;
  json venues = json::array();
  for (const Venue& v : venues_) {
    json j = v.attributes;
    j["name"] = v.name;
    venues.push_back(j);
  }
  doc["venues"] = venues;
  return doc;
}

}  // namespace usersim
