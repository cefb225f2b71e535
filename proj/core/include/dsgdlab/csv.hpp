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


// CSV output.  Doubles are written in the shortest form that parses back to
// the same value.

#ifndef DSGDLAB_CSV_HPP_
#define DSGDLAB_CSV_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dsgdlab/engine.hpp"

namespace dsgdlab {

inline constexpr std::string_view kTraceHeader =
    "k,U_mean,U_stderr,V_mean,V_stderr,mean_err_mean,mean_err_stderr";

std::string format_double(double v);
/// Inverse of format_double; kFormat on malformed input.
double parse_double(std::string_view s);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> row);
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept {
    return rows_;
  }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Splits comma-separated lines; the first line becomes the header.
CsvTable parse_csv(std::string_view text);

std::string trace_csv(const MonteCarloAggregate& agg);
/// Reads a trace written by trace_csv (runs and base_seed are left 0).
MonteCarloAggregate parse_trace_csv(std::string_view text);

/// Writes `content` to `path`, creating parent directories.  kIo on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace dsgdlab

#endif  // DSGDLAB_CSV_HPP_
