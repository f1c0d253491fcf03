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

#include "usersim/vocabulary.h"

#include <set>

#include "usersim/errors.h"

namespace usersim {

std::string ValueToken(std::string_view slot) {
  return "<value_" + std::string(slot) + ">";
}

std::string_view SlotOfValueToken(std::string_view token) {
  constexpr std::string_view kPrefix = "<value_";
  if (token.size() <= kPrefix.size() + 1 || token.substr(0, kPrefix.size()) != kPrefix ||
      token.back() != '>') {
    return {};
  }
  return token.substr(kPrefix.size(), token.size() - kPrefix.size() - 1);
}

Vocabulary::Vocabulary()
    : Vocabulary(std::vector<std::string>{std::string(kSosToken), std::string(kEosToken),
                                          std::string(kUnkToken)}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 3 || tokens_[kSos] != kSosToken || tokens_[kEos] != kEosToken ||
      tokens_[kUnk] != kUnkToken) {
    throw Error(ErrorCode::kInvalidState, "vocabulary must start with <SOS> <EOS> <UNK>");
  }
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::kInvalidState, "duplicate token " + tokens_[i]);
    }
  }
}

Vocabulary Vocabulary::Build(std::span<const std::vector<std::string>> sequences) {
  std::set<std::string> unique;
  for (const auto& seq : sequences) unique.insert(seq.begin(), seq.end());
  std::vector<std::string> tokens = {std::string(kSosToken), std::string(kEosToken),
                                     std::string(kUnkToken)};
  for (const std::string& t : unique) {
    if (t != kSosToken && t != kEosToken && t != kUnkToken) tokens.push_back(t);
  }
  return Vocabulary(std::move(tokens));
}

int Vocabulary::Id(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> Vocabulary::Encode(std::span<const std::string> tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens) {
    const int id = Id(t);
    if (id < 0) throw Error(ErrorCode::kUnknownToken, t);
    ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> Vocabulary::Decode(std::span<const int> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(Token(id));
  return out;
}

}  // namespace usersim
