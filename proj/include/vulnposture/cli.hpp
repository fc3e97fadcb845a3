// Copyright 2026 The vulnposture Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VULNPOSTURE_CLI_HPP_
#define VULNPOSTURE_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace vulnposture {

// Exit codes shared by every command. kViolated is only produced by `eval`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolated = 2;

// Runs the command line `args` (args[0] is the program name). Reports go to
// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vulnposture

#endif  // VULNPOSTURE_CLI_HPP_
