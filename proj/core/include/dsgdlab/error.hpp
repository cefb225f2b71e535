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

#ifndef DSGDLAB_ERROR_HPP_
#define DSGDLAB_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsgdlab {

enum class ErrorKind {
  kInvalidArgument,  // precondition on a size / probability / index
  kConfig,           // experiment configuration rejected
  kDomain,           // bound evaluated outside its validity range
  kNumeric,          // non-finite iterate or solver non-convergence
  kGeneration,       // random graph could not be made connected
  kConstruction,     // problem instance cannot be built from its inputs
  kFormat,           // IDX magic / header mismatch
  kLength,           // IDX payload truncated
  kConsistency,      // IDX image and label files disagree
  kIo,               // filesystem failure
};

std::string_view to_string(ErrorKind kind);

/// Single exception type of the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace dsgdlab

#endif  // DSGDLAB_ERROR_HPP_
