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


#ifndef USERSIM_TOOLS_COMMANDS_H_
#define USERSIM_TOOLS_COMMANDS_H_

#include <iosfwd>

namespace usersim::app {

// Subcommands: prepare-data, synth-corpus, train-us, train-policy,
// cross-eval, serve, chat. Returns 0 on success, 1 on a runtime error and 2
// on a usage error.
int RunCli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
           std::ostream& err);

}  // namespace usersim::app

#endif  // USERSIM_TOOLS_COMMANDS_H_
