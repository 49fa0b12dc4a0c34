#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace msgcli {

/// Formats a double with 12 significant digits (the fixed CSV precision).
std::string format_number(double value);

/// Streams one table: a header row, then data rows in insertion order.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names);

  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  CsvWriter& field(const std::string& value);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
  bool header_written_ = false;
};

}  // namespace msgcli
