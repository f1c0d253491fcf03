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

#ifndef USERSIM_SEMANTIC_DECODER_H_
#define USERSIM_SEMANTIC_DECODER_H_

#include <filesystem>
#include <mutex>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "usersim/dialogue_acts.h"
#include "usersim/ontology.h"

namespace usersim {

// Regular-expression decoder from user text to user acts.
//
// Rule file: one rule per line, `pattern<TAB>act-template`. Blank lines and
// lines starting with '#' are ignored. Inside a pattern, `{slot}` expands to
// an alternation of that informable slot's values, longest first. Inside an
// act template, `$1`..`$9` are replaced by capture groups.
//
// All rule matches are collected, overlaps are resolved by keeping the
// longest span (ties: earliest start, then earliest rule), and the surviving
// acts are returned in text order without duplicates. Text that matches no
// rule decodes to a single null act.
class SemanticDecoder {
 public:
  SemanticDecoder(const Ontology& ontology, std::string_view rules_text);
  static SemanticDecoder Load(const Ontology& ontology, const std::filesystem::path& path);

  std::vector<UserAct> Parse(std::string_view text) const;

  // Lower-cases, drops apostrophes, turns other punctuation into spaces and
  // collapses whitespace.
  static std::string Normalize(std::string_view text);

  size_t num_rules() const { return rules_.size(); }

 private:
  struct Rule {
    std::regex pattern;
    std::string act_template;
    int line = 0;
  };
  std::vector<Rule> rules_;
};

// Memoizing front end; safe to share between threads.
class CachingDecoder {
 public:
  explicit CachingDecoder(const SemanticDecoder& decoder) : decoder_(decoder) {}

  std::vector<UserAct> Parse(std::string_view text) const;

 private:
  const SemanticDecoder& decoder_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, std::vector<UserAct>> cache_;
};

}  // namespace usersim

#endif  // USERSIM_SEMANTIC_DECODER_H_
