// Copyright 2026 The qgen Authors.
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

// The qgen command line:
//
//   qgen eval PROGRAM BOARD.json
//   qgen eig PROGRAM [--context CONTEXT.json]
//   qgen train|loocv|generate [--preset desk|paper] [--pool-size N] ...

#ifndef QGEN_CLI_HPP_
#define QGEN_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace qgen {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitSyntax = 3,
  kExitType = 4,
  kExitIo = 5,  // missing or malformed files
  kExitInconsistentContext = 6,
  kExitNumeric = 7,
  kExitDerivation = 8,
};

// args excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgen

#endif  // QGEN_CLI_HPP_
