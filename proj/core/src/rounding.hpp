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


#ifndef DSGDLAB_SRC_ROUNDING_HPP_
#define DSGDLAB_SRC_ROUNDING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace dsgdlab::detail {

// ceil(x) that treats values within 1e-12 relative above an integer as that
// integer, so 16 / (1 - rho^2) with a rounded rho = 1/3 still gives 18.
inline std::size_t ceil_count(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) {
    return static_cast<std::size_t>(r);
  }
  return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace dsgdlab::detail

#endif  // DSGDLAB_SRC_ROUNDING_HPP_
