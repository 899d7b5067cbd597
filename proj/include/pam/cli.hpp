// Copyright 2026 The PAM Authors
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

#ifndef PAM_CLI_HPP_
#define PAM_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace pam {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

// Environment variable holding the default for --jobs.
inline constexpr const char* kJobsEnv = "PAM_JOBS";

// Entry point of the `pam` tool; args excludes the program name. Outputs are
// written atomically, so a failing command leaves no partial file behind.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace pam

#endif  // PAM_CLI_HPP_
