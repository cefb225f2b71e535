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

#include "dsgdlab/error.hpp"

namespace dsgdlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kGeneration: return "generation";
    case ErrorKind::kConstruction: return "construction";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kLength: return "length";
    case ErrorKind::kConsistency: return "consistency";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace dsgdlab
