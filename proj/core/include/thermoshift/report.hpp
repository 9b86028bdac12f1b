#pragma once

#include <string>
#include <utility>
#include <vector>

namespace thermoshift {

/// %.12g rendering shared by every report and test output.
std::string fmt_double(double v);

struct ReportTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// A tabular text report plus a flat key-value sidecar (same data, `.kv`
/// suffix).  Files are written atomically via a temp file and rename.
struct Report {
  std::string title;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<ReportTable> tables;
  std::vector<std::string> notes;

  void add(const std::string& key, const std::string& value) {
    summary.emplace_back(key, value);
  }
  void add(const std::string& key, double value) {
    summary.emplace_back(key, fmt_double(value));
  }
};

void write_report(const Report& r, const std::string& path);

}  // namespace thermoshift
