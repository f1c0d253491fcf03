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

#include "usersim/delexicalize.h"

#include <algorithm>
#include <sstream>

#include "usersim/semantic_decoder.h"
#include "usersim/vocabulary.h"

namespace usersim {

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

std::string JoinWords(std::span<const std::string> words) {
  std::string out;
  for (const std::string& w : words) {
    if (w.empty()) continue;
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

Delexicalizer::Delexicalizer(const Ontology& ontology) {
  for (const InformableSlot& slot : ontology.informable()) {
    for (const std::string& value : slot.values) {
      phrases_.push_back({SplitWords(SemanticDecoder::Normalize(value)), ValueToken(slot.name)});
    }
  }
  for (const Venue& venue : ontology.venues()) {
    phrases_.push_back({SplitWords(SemanticDecoder::Normalize(venue.name)),
                        std::string(kNameToken)});
  }
  std::stable_sort(phrases_.begin(), phrases_.end(), [](const Phrase& a, const Phrase& b) {
    return a.words.size() > b.words.size();
  });
}

Delexicalizer::Result Delexicalizer::Delexicalize(std::string_view text, int max_len) const {
  const std::vector<std::string> words = SplitWords(SemanticDecoder::Normalize(text));
  Result result;
  size_t i = 0;
  while (i < words.size()) {
    const Phrase* match = nullptr;
    for (const Phrase& phrase : phrases_) {
      if (phrase.words.empty() || i + phrase.words.size() > words.size()) continue;
      if (std::equal(phrase.words.begin(), phrase.words.end(), words.begin() + i)) {
        match = &phrase;
        break;
      }
    }
    if (match) {
      result.tokens.push_back(match->token);
      i += match->words.size();
    } else {
      result.tokens.push_back(words[i++]);
    }
  }
  result.tokens.emplace_back(kEosToken);
  result.too_long = static_cast<int>(result.tokens.size()) > max_len;
  return result;
}

LexicalizeResult Lexicalize(std::span<const std::string> tokens, const Goal& goal,
                            const std::optional<std::string>& venue_name) {
  LexicalizeResult result;
  std::vector<std::string> words;
  for (const std::string& token : tokens) {
    if (token == kEosToken) break;
    if (token == kSosToken) continue;
    if (token == kNameToken) {
      if (venue_name) words.push_back(*venue_name);
      continue;
    }
    const std::string_view slot = SlotOfValueToken(token);
    if (!slot.empty()) {
      auto it = goal.constraints.find(std::string(slot));
      if (it == goal.constraints.end()) {
        ++result.unfilled_slots;
        words.emplace_back("any");
      } else {
        words.push_back(it->second == kDontCare ? std::string("any") : it->second);
      }
      continue;
    }
    if (token.empty() || (token.front() == '<' && token.back() == '>')) {
      ++result.unknown_tokens;
      continue;
    }
    words.push_back(token);
  }
  result.text = JoinWords(words);
  return result;
}

}  // namespace usersim
