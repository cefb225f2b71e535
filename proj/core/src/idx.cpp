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

#include "dsgdlab/idx.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "dsgdlab/error.hpp"

namespace dsgdlab {

std::size_t IdxDataset::item_size() const noexcept {
  std::size_t s = 1;
  for (std::uint32_t d : item_dims) s *= d;
  return s;
}

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t at) {
  return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
         (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::string hex32(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex;
  os.width(8);
  os.fill('0');
  os << v;
  return os.str();
}

struct IdxArray {
  std::vector<std::uint32_t> dims;
  std::span<const std::uint8_t> payload;
};

IdxArray parse_array(std::span<const std::uint8_t> bytes,
                     std::uint32_t expected_magic, const char* what) {
  if (bytes.size() < 4) {
    fail(ErrorKind::kLength, std::string(what) + " file shorter than its magic");
  }
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != expected_magic) {
    fail(ErrorKind::kFormat, std::string(what) + " file has magic " +
                                 hex32(magic) + ", expected " +
                                 hex32(expected_magic));
  }
  const std::size_t ndims = expected_magic & 0xff;
  const std::size_t header = 4 + 4 * ndims;
  if (bytes.size() < header) {
    fail(ErrorKind::kLength, std::string(what) + " file header truncated");
  }
  IdxArray arr;
  std::size_t count = 1;
  for (std::size_t d = 0; d < ndims; ++d) {
    arr.dims.push_back(read_be32(bytes, 4 + 4 * d));
    count *= arr.dims.back();
  }
  if (bytes.size() - header < count) {
    fail(ErrorKind::kLength, std::string(what) + " payload truncated: " +
                                 std::to_string(bytes.size() - header) +
                                 " of " + std::to_string(count) + " bytes");
  }
  arr.payload = bytes.subspan(header, count);
  return arr;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::kIo, "read failed for " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace

IdxDataset decode_idx(std::span<const std::uint8_t> image_bytes,
                      std::span<const std::uint8_t> label_bytes) {
  const IdxArray images = parse_array(image_bytes, kIdxImageMagic, "image");
  const IdxArray labels = parse_array(label_bytes, kIdxLabelMagic, "label");
  if (images.dims[0] != labels.dims[0]) {
    fail(ErrorKind::kConsistency,
         "image file has " + std::to_string(images.dims[0]) +
             " items but label file has " + std::to_string(labels.dims[0]));
  }
  IdxDataset ds;
  ds.item_dims.assign(images.dims.begin() + 1, images.dims.end());
  ds.pixels.assign(images.payload.begin(), images.payload.end());
  ds.labels.assign(labels.payload.begin(), labels.payload.end());
  return ds;
}

std::vector<std::uint8_t> encode_idx_images(const IdxDataset& ds) {
  if (ds.item_dims.size() != 2) {
    fail(ErrorKind::kFormat, "image items must be two-dimensional");
  }
  std::vector<std::uint8_t> out;
  write_be32(out, kIdxImageMagic);
  write_be32(out, static_cast<std::uint32_t>(ds.size()));
  for (std::uint32_t d : ds.item_dims) write_be32(out, d);
  out.insert(out.end(), ds.pixels.begin(), ds.pixels.end());
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(const IdxDataset& ds) {
  std::vector<std::uint8_t> out;
  write_be32(out, kIdxLabelMagic);
  write_be32(out, static_cast<std::uint32_t>(ds.size()));
  out.insert(out.end(), ds.labels.begin(), ds.labels.end());
  return out;
}

IdxDataset load_idx(const std::filesystem::path& image_path,
                    const std::filesystem::path& label_path) {
  const auto images = read_file(image_path);
  const auto labels = read_file(label_path);
  return decode_idx(images, labels);
}

void save_idx(const IdxDataset& ds, const std::filesystem::path& image_path,
              const std::filesystem::path& label_path) {
  write_file(image_path, encode_idx_images(ds));
  write_file(label_path, encode_idx_labels(ds));
}

IdxDataset synthetic_two_cluster(std::size_t per_class, std::uint32_t side,
                                 std::uint8_t digit_a, std::uint8_t digit_b,
                                 std::uint64_t seed) {
  if (side == 0 || per_class == 0) {
    fail(ErrorKind::kInvalidArgument, "synthetic dataset needs side, count >= 1");
  }
  Rng rng(seed);
  const std::size_t pixels = std::size_t{side} * side;
  std::uniform_real_distribution<double> level(0.2, 0.8);
  std::vector<double> mean_a(pixels), mean_b(pixels);
  for (std::size_t k = 0; k < pixels; ++k) {
    mean_a[k] = level(rng);
    mean_b[k] = level(rng);
  }
  std::normal_distribution<double> noise(0.0, 0.2);

  IdxDataset ds;
  ds.item_dims = {side, side};
  ds.pixels.reserve(2 * per_class * pixels);
  for (std::size_t item = 0; item < 2 * per_class; ++item) {
    const bool is_a = item % 2 == 0;
    const auto& mean = is_a ? mean_a : mean_b;
    for (std::size_t k = 0; k < pixels; ++k) {
      const double v = std::clamp(mean[k] + noise(rng), 0.0, 1.0);
      ds.pixels.push_back(static_cast<std::uint8_t>(std::lround(255.0 * v)));
    }
    ds.labels.push_back(is_a ? digit_a : digit_b);
  }
  return ds;
}

std::size_t count_binary_pool(const IdxDataset& ds, std::uint8_t digit_a,
                              std::uint8_t digit_b) {
  return static_cast<std::size_t>(
      std::count_if(ds.labels.begin(), ds.labels.end(), [&](std::uint8_t l) {
        return l == digit_a || l == digit_b;
      }));
}

LogisticProblem build_binary_task(const IdxDataset& ds, std::uint8_t digit_a,
                                  std::uint8_t digit_b, std::size_t per_agent,
                                  std::size_t n, std::uint64_t seed,
                                  double lambda, std::size_t minibatch) {
  if (digit_a == digit_b) {
    fail(ErrorKind::kConfig, "the two digits must differ");
  }
  if (n == 0 || per_agent == 0) {
    fail(ErrorKind::kConfig, "need at least one agent with one data point");
  }
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] == digit_a || ds.labels[i] == digit_b) pool.push_back(i);
  }
  if (pool.size() < n * per_agent) {
    fail(ErrorKind::kConfig,
         "insufficient data: " + std::to_string(pool.size()) +
             " filtered points for " + std::to_string(n) + " agents x " +
             std::to_string(per_agent));
  }
  Rng rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);

  const std::size_t pixels = ds.item_size();
  const std::size_t dim = pixels + 1;
  std::vector<AgentDataset> sets(n);
  for (std::size_t a = 0; a < n; ++a) {
    AgentDataset& d = sets[a];
    d.features = Matrix(per_agent, dim);
    d.labels.resize(per_agent);
    for (std::size_t j = 0; j < per_agent; ++j) {
      const std::size_t item = pool[a * per_agent + j];
      const auto img = ds.image(item);
      auto row = d.features.row(j);
      for (std::size_t k = 0; k < pixels; ++k) row[k] = img[k] / 255.0;
      row[pixels] = 1.0;
      d.labels[j] = ds.labels[item] == digit_a ? 0.0 : 1.0;
    }
  }
  return LogisticProblem(std::move(sets), lambda, minibatch);
}

}  // namespace dsgdlab
