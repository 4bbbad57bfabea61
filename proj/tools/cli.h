// Copyright 2026 The MML Authors.
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

// Entry point of the mml tool, callable in-process for tests.
//
// Exit codes: 0 ok, 2 configuration error, 3 data validation error,
// 4 runtime failure.

#ifndef MML_TOOLS_CLI_H_
#define MML_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "mml/status.h"

namespace mml::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitRuntime = 4;

int ExitClassFor(ErrorCode code);

// `args` excludes the program name. Reports go to `out`, diagnostics to
// `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace mml::tools

#endif  // MML_TOOLS_CLI_H_
