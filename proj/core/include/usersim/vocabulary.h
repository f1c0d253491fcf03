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

#ifndef USERSIM_VOCABULARY_H_
#define USERSIM_VOCABULARY_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace usersim {

inline constexpr std::string_view kSosToken = "<SOS>";
inline constexpr std::string_view kEosToken = "<EOS>";
inline constexpr std::string_view kUnkToken = "<UNK>";
inline constexpr std::string_view kNameToken = "<name>";

// "<value_food>" for slot "food".
std::string ValueToken(std::string_view slot);
// Slot name for a value token, empty when `token` is not one.
std::string_view SlotOfValueToken(std::string_view token);

// Dense token ids: <SOS>=0, <EOS>=1, <UNK>=2, then the remaining tokens in
// sorted order.
class Vocabulary {
 public:
  static constexpr int kSos = 0;
  static constexpr int kEos = 1;
  static constexpr int kUnk = 2;

  Vocabulary();
  explicit Vocabulary(std::vector<std::string> tokens);

  static Vocabulary Build(std::span<const std::vector<std::string>> sequences);

  size_t size() const { return tokens_.size(); }
  int Id(std::string_view token) const;  // -1 if absent
  const std::string& Token(int id) const { return tokens_.at(static_cast<size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Throws kUnknownToken.
  std::vector<int> Encode(std::span<const std::string> tokens) const;
  std::vector<std::string> Decode(std::span<const int> ids) const;

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int, std::less<>> index_;
};

}  // namespace usersim

#endif  // USERSIM_VOCABULARY_H_
