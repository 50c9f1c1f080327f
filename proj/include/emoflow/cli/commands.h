// include/emoflow/cli/commands.h

// Copyright 2026  Emoflow Authors

// See the top-level LICENSE file for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef EMOFLOW_CLI_COMMANDS_H_
#define EMOFLOW_CLI_COMMANDS_H_

namespace emoflow {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

// Entry point of the emoflow tool: parses argv, dispatches to one
// subcommand and maps errors to exit codes.  Logs go to stderr.
int RunEmoflowCli(int argc, const char *const *argv);

}  // namespace emoflow

#endif  // EMOFLOW_CLI_COMMANDS_H_
