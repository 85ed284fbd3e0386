// Copyright 2026 The ordalign Authors
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

#ifndef ORDALIGN_TOOLS_COMMANDS_HPP_
#define ORDALIGN_TOOLS_COMMANDS_HPP_

namespace ordalign::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kNumericalFailure = 2,
  kIoFailure = 3,
};

/// Parses argv and runs one subcommand: generate, align, eval, classify,
/// baseline or grid. Errors are reported on stderr and mapped to ExitCode.
int run(int argc, const char* const* argv);

}  // namespace ordalign::cli

#endif  // ORDALIGN_TOOLS_COMMANDS_HPP_
