#include "atomlens/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace atomlens {

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : out_(path, std::ios::binary | std::ios::trunc),
      path_(path),
      columns_(columns.size()) {
  if (!out_) throw std::runtime_error("csv: cannot open " + path);
  if (columns.empty()) throw std::invalid_argument("csv: no columns");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].find_first_of(",\"\r\n") != std::string::npos)
      throw std::invalid_argument("csv: column name needs quoting: " + columns[i]);
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << "\r\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw std::invalid_argument("csv: row width does not match header");
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format(values[i]);
  }
  line += "\r\n";
  out_ << line;
  if (!out_) throw std::runtime_error("csv: write failed for " + path_);
}

std::string CsvWriter::format(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

} // namespace atomlens
