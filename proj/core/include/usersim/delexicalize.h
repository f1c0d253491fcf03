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

#ifndef USERSIM_DELEXICALIZE_H_
#define USERSIM_DELEXICALIZE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "usersim/goal.h"
#include "usersim/ontology.h"

namespace usersim {

inline constexpr int kMaxTurnTokens = 22;

// Word-level replacement of ontology values by <value_SLOT> and of venue
// names by <name>, longest phrase first.
class Delexicalizer {
 public:
  explicit Delexicalizer(const Ontology& ontology);

  struct Result {
    std::vector<std::string> tokens;  // ends in <EOS>
    bool too_long = false;            // more than max_len tokens with <EOS>
  };

  // Normalizes the text the same way the semantic decoder does.
  Result Delexicalize(std::string_view text, int max_len = kMaxTurnTokens) const;

 private:
  struct Phrase {
    std::vector<std::string> words;
    std::string token;
  };
  std::vector<Phrase> phrases_;  // longest first
};

struct LexicalizeResult {
  std::string text;
  int unfilled_slots = 0;  // value tokens for unconstrained slots
  int unknown_tokens = 0;  // <UNK> and other special tokens dropped
};

// Inverse of delexicalization against the current goal. dontcare and
// unconstrained slots read "any"; <name> needs a venue and is dropped
// otherwise.
LexicalizeResult Lexicalize(std::span<const std::string> tokens, const Goal& goal,
                            const std::optional<std::string>& venue_name);

std::vector<std::string> SplitWords(std::string_view text);
std::string JoinWords(std::span<const std::string> words);

}  // namespace usersim

#endif  // USERSIM_DELEXICALIZE_H_
