#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "poreimg/error.hpp"

namespace poreimg::io {

/// Minimal CSV emitter; numbers are printed with %.17g so equal doubles
/// serialize to identical text.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path) {
    require(out_.good(), "CsvWriter: cannot open " + path.string());
  }

  void header(const std::vector<std::string>& names) { line(names); }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format(v));
    line(cells);
  }

  void raw_row(const std::vector<std::string>& cells) { line(cells); }

  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  void line(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  std::ofstream out_;
};

}  // namespace poreimg::io
