#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "qfel/errors.hpp"

namespace qfel {

// 17 significant digits, enough for doubles to round-trip losslessly.
std::string format_float(double v);

// Comma-delimited, header row, LF line endings (binary stream, so the body is
// byte-identical across platforms).
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);

  // Flushes and reports failures as IoError.
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  size_t columns_ = 0;
};

}  // namespace qfel
