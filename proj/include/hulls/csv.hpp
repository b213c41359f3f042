#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hulls {

// Full-precision decimal rendering; round-trips any double.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One cell: text, integer, double, or empty.
struct CsvCell {
  std::string text;
  CsvCell(const char* s) : text(s) {}
  CsvCell(std::string s) : text(std::move(s)) {}
  CsvCell(double v) : text(csv_num(v)) {}
  CsvCell(std::uint64_t v) : text(std::to_string(v)) {}
  CsvCell(int v) : text(std::to_string(v)) {}
  CsvCell(bool v) : text(v ? "true" : "false") {}
};

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
  }

  void row(std::initializer_list<CsvCell> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) out_ << ',';
      out_ << c.text;
      first = false;
    }
    out_ << '\n';
  }

  void close() { out_.close(); }

 private:
  std::ofstream out_;
};

}  // namespace hulls
