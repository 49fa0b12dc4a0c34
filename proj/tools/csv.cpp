#include "csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace msgcli {

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  if (header_written_) throw std::logic_error("header already written");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << names[i];
  }
  out_ << '\n';
  columns_ = names.size();
  header_written_ = true;
}

void CsvWriter::separator() {
  if (in_row_ > 0) out_ << ',';
  ++in_row_;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  out_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::field(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::field(const std::string& value) {
  separator();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) {
    throw std::logic_error("row width " + std::to_string(in_row_) +
                           " does not match header width " +
                           std::to_string(columns_));
  }
  out_ << '\n';
  in_row_ = 0;
}

}  // namespace msgcli
