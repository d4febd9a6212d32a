// SPDX-License-Identifier: Apache-2.0
#include "hdld/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "hdld/error.hpp"

namespace hdld {

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = std::strtod(buf, nullptr);
    if (back == v || (back != back && v != v)) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
  require(!columns_.empty(), Errc::invalid_argument, "csv: need at least one column");
}

void CsvWriter::add_row(const std::vector<double>& row) {
  require(row.size() == columns_.size(), Errc::invalid_argument,
          "csv: row width does not match the header");
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) line += ',';
    line += format_double(row[i]);
  }
  rows_.push_back(std::move(line));
}

void CsvWriter::add_comment(const std::string& text) { comments_.push_back("# " + text); }

std::string CsvWriter::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const std::string& r : rows_) {
    out += r;
    out += '\n';
  }
  for (const std::string& c : comments_) {
    out += c;
    out += '\n';
  }
  return out;
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(bool(out), Errc::io, "csv: cannot open " + path + " for writing");
  std::string text = to_string();
  out.write(text.data(), std::streamsize(text.size()));
  require(bool(out), Errc::io, "csv: write failed for " + path);
}

}  // namespace hdld
