// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace hdld {

// Shortest round-trippable decimal form of a double (printf %.17g trimmed to
// the first length that parses back exactly).
std::string format_double(double v);

// Column-ordered CSV with optional trailing '#' comment lines, written
// byte-identically for identical inputs.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void add_row(const std::vector<double>& row);
  void add_comment(const std::string& text);

  std::string to_string() const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
  std::vector<std::string> comments_;
};

}  // namespace hdld
