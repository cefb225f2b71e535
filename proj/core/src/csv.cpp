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


#include "dsgdlab/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "dsgdlab/error.hpp"

namespace dsgdlab {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(ErrorKind::kFormat, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    fail(ErrorKind::kFormat, "CSV row has " + std::to_string(row.size()) +
                                 " fields, header has " +
                                 std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

namespace {

void append_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  out += '\n';
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  append_line(out, header_);
  for (const auto& r : rows_) append_line(out, r);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = pos + 1;
  }
  if (lines.empty()) fail(ErrorKind::kFormat, "CSV is empty");
  CsvTable t(split(lines[0]));
  for (std::size_t i = 1; i < lines.size(); ++i) t.add_row(split(lines[i]));
  return t;
}

std::string trace_csv(const MonteCarloAggregate& a) {
  std::string out(kTraceHeader);
  out += '\n';
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += std::to_string(a.k[i]);
    for (double v : {a.U_mean[i], a.U_stderr[i], a.V_mean[i], a.V_stderr[i],
                     a.mean_err_mean[i], a.mean_err_stderr[i]}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

MonteCarloAggregate parse_trace_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  std::string header;
  for (std::size_t i = 0; i < t.header().size(); ++i) {
    header += (i ? "," : "") + t.header()[i];
  }
  if (header != kTraceHeader) {
    fail(ErrorKind::kFormat, "unexpected trace header: " + header);
  }
  MonteCarloAggregate a;
  for (const auto& r : t.rows()) {
    std::size_t k = 0;
    const auto res = std::from_chars(r[0].data(), r[0].data() + r[0].size(), k);
    if (res.ec != std::errc() || res.ptr != r[0].data() + r[0].size()) {
      fail(ErrorKind::kFormat, "bad iteration field '" + r[0] + "'");
    }
    a.k.push_back(k);
    a.U_mean.push_back(parse_double(r[1]));
    a.U_stderr.push_back(parse_double(r[2]));
    a.V_mean.push_back(parse_double(r[3]));
    a.V_stderr.push_back(parse_double(r[4]));
    a.mean_err_mean.push_back(parse_double(r[5]));
    a.mean_err_stderr.push_back(parse_double(r[6]));
  }
  return a;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      fail(ErrorKind::kIo, "cannot create directory " +
                               path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) fail(ErrorKind::kIo, "error writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dsgdlab
