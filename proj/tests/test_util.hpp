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


#ifndef DSGDLAB_TESTS_TEST_UTIL_HPP_
#define DSGDLAB_TESTS_TEST_UTIL_HPP_

#include <gtest/gtest.h>

#include <string>

#include "dsgdlab/error.hpp"
#include "dsgdlab/linalg.hpp"
#include "oracles.hpp"

#define EXPECT_ERROR_KIND(stmt, expected_kind)                              \
  do {                                                                      \
    bool thrown_ = false;                                                   \
    try {                                                                   \
      stmt;                                                                 \
    } catch (const ::dsgdlab::Error& e_) {                                  \
      thrown_ = true;                                                       \
      EXPECT_EQ(e_.kind(), expected_kind) << e_.what();                     \
    }                                                                       \
    EXPECT_TRUE(thrown_) << "expected dsgdlab::Error from " #stmt;          \
  } while (0)

inline oracle::Dense to_dense(const dsgdlab::Matrix& m) {
  oracle::Dense d = oracle::zeros(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  return d;
}

#endif  // DSGDLAB_TESTS_TEST_UTIL_HPP_
