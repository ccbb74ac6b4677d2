#pragma once
#include <fstream>
#include <string>
#include <vector>

// CSV output (RFC 4180: CRLF line endings, header row first).
namespace atomlens {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<double>& values); // size must match the header
  void flush() { out_.flush(); }
  const std::string& path() const { return path_; }

  // Shortest decimal form that round-trips to the same double.
  static std::string format(double v);

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_ = 0;
};

} // namespace atomlens
