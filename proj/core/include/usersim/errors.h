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

#ifndef USERSIM_ERRORS_H_
#define USERSIM_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace usersim {

enum class ErrorCode {
  kParse,
  kDuplicateSlot,
  kUnknownValue,
  kUnknownSlot,
  kUnknownAct,
  kUnknownToken,
  kDimensionMismatch,
  kEmptyInput,
  kMissingTemplate,
  kIncompleteEpisode,
  kInvalidState,
  kNotFound,
  kConflict,
  kConfig,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The code is
// stable and is what callers (and tests) should branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace usersim

#endif  // USERSIM_ERRORS_H_
