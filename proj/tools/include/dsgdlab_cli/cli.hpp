// Copyright 2026 The dsgdlab Authors.
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


#ifndef DSGDLAB_CLI_CLI_HPP_
#define DSGDLAB_CLI_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "dsgdlab/error.hpp"

namespace dsgdlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitIo = 3;

int exit_code_for(ErrorKind kind);

/// args[0] is the program name.  Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dsgdlab::cli

#endif  // DSGDLAB_CLI_CLI_HPP_
