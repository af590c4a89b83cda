#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bayesucb {

// Shortest decimal representation that round-trips the exact double, so CSV
// reruns can be compared by file hash.
std::string format_double(double value);

// Minimal CSV writer: header row, comma separators, LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  const std::string& text() const { return text_; }
  void write_file(const std::string& path) const;

  static std::string cell(double value) { return format_double(value); }
  static std::string cell(std::int64_t value) { return std::to_string(value); }
  static std::string cell(int value) { return std::to_string(value); }

 private:
  std::size_t num_columns_;
  std::string text_;
};

}  // namespace bayesucb
