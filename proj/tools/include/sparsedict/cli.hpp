// Copyright 2026 The sparsedict Authors.
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sparsedict::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,        ///< converged / all checks passed
  kError = 1,     ///< usage, input or runtime error
  kMaxIters = 2,  ///< solver stopped at its iteration cap
};

/// Runs the sparsedict command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker threads for independent trials: SPARSEDICT_THREADS if set to a
/// positive integer, otherwise 1.
int thread_budget();

}  // namespace sparsedict::cli
