// Copyright 2026 The rvf Authors.
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

#ifndef RVF_TOOLS_CLI_HPP_
#define RVF_TOOLS_CLI_HPP_

#include <iosfwd>

namespace rvf::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;      // bad arguments or input files
inline constexpr int kFault = 2;      // simulation fault
inline constexpr int kNoResult = 3;   // empty or infeasible search

/// Environment variable naming the default configuration directory.
inline constexpr const char* kConfigDirEnv = "RVF_CONFIG_DIR";

/// Runs the rvf command line. Diagnostics go to `err`, progress to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rvf::cli

#endif  // RVF_TOOLS_CLI_HPP_
