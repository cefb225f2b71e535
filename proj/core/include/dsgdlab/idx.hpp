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

// IDX (MNIST) files and the binary classification task built from them.
//
// Layout: 4-byte big-endian magic 0x000008DD (0x08 = unsigned byte payload,
// DD = number of dimensions), one 4-byte big-endian size per dimension,
// then the raw bytes in row-major order.

#ifndef DSGDLAB_IDX_HPP_
#define DSGDLAB_IDX_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dsgdlab/problems.hpp"

namespace dsgdlab {

inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;

struct IdxDataset {
  std::vector<std::uint32_t> item_dims;  // e.g. {28, 28}
  std::vector<std::uint8_t> pixels;      // items * item_size bytes
  std::vector<std::uint8_t> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t item_size() const noexcept;
  std::span<const std::uint8_t> image(std::size_t i) const {
    return {pixels.data() + i * item_size(), item_size()};
  }
};

/// Parses an image file (magic 0x803) and a label file (magic 0x801).
/// Errors: kIo (unreadable), kFormat (bad magic), kLength (truncated),
/// kConsistency (item counts differ).
IdxDataset load_idx(const std::filesystem::path& image_path,
                    const std::filesystem::path& label_path);

/// Decoders over in-memory buffers, used by load_idx.
IdxDataset decode_idx(std::span<const std::uint8_t> image_bytes,
                      std::span<const std::uint8_t> label_bytes);
std::vector<std::uint8_t> encode_idx_images(const IdxDataset& ds);
std::vector<std::uint8_t> encode_idx_labels(const IdxDataset& ds);

void save_idx(const IdxDataset& ds, const std::filesystem::path& image_path,
              const std::filesystem::path& label_path);

/// Stand-in for MNIST when the real files are absent: two classes with
/// labels digit_a / digit_b, each a per-class mean image plus Gaussian pixel
/// noise, clamped to bytes.
IdxDataset synthetic_two_cluster(std::size_t per_class, std::uint32_t side,
                                 std::uint8_t digit_a, std::uint8_t digit_b,
                                 std::uint64_t seed);

/// Keeps labels digit_a (-> 0) and digit_b (-> 1), scales pixels to [0, 1],
/// appends a constant 1 bias feature and deals a seeded random permutation
/// into n disjoint datasets of `per_agent` points.
LogisticProblem build_binary_task(const IdxDataset& ds, std::uint8_t digit_a,
                                  std::uint8_t digit_b, std::size_t per_agent,
                                  std::size_t n, std::uint64_t seed,
                                  double lambda, std::size_t minibatch = 1);

/// Number of items whose label is digit_a or digit_b.
std::size_t count_binary_pool(const IdxDataset& ds, std::uint8_t digit_a,
                              std::uint8_t digit_b);

}  // namespace dsgdlab

#endif  // DSGDLAB_IDX_HPP_
