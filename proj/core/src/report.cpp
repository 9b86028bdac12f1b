#include "thermoshift/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "thermoshift/exact.hpp"

namespace thermoshift {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string kv_escape(const std::string& s) {
  std::string out;
  for (char c : s)
    out.push_back(c == '\n' ? ' ' : c);
  return out;
}

}  // namespace

void write_report(const Report& r, const std::string& path) {
  std::ostringstream text, kv;
  text << "# " << r.title << "\n\n";
  kv << "title = " << kv_escape(r.title) << "\n";
  for (const auto& [k, v] : r.summary) {
    text << k << ": " << v << "\n";
    kv << kv_escape(k) << " = " << kv_escape(v) << "\n";
  }
  for (const auto& t : r.tables) {
    text << "\n";
    if (!t.title.empty()) text << "## " << t.title << "\n";
    std::vector<size_t> w(t.columns.size());
    for (size_t c = 0; c < t.columns.size(); ++c) w[c] = t.columns[c].size();
    for (const auto& row : t.rows)
      for (size_t c = 0; c < row.size() && c < w.size(); ++c)
        w[c] = std::max(w[c], row[c].size());
    const auto emit = [&](const std::vector<std::string>& row) {
      for (size_t c = 0; c < row.size(); ++c) {
        if (c) text << "  ";
        text << row[c];
        if (c + 1 < row.size())
          text << std::string(w[c] - std::min(w[c], row[c].size()), ' ');
      }
      text << "\n";
    };
    emit(t.columns);
    for (size_t i = 0; i < t.rows.size(); ++i) {
      emit(t.rows[i]);
      for (size_t c = 0; c < t.rows[i].size(); ++c)
        kv << kv_escape(t.title.empty() ? "table" : t.title) << "." << i << "."
           << kv_escape(t.columns[c]) << " = " << kv_escape(t.rows[i][c])
           << "\n";
    }
  }
  if (!r.notes.empty()) {
    text << "\n";
    for (size_t i = 0; i < r.notes.size(); ++i) {
      text << "note: " << r.notes[i] << "\n";
      kv << "note." << i << " = " << kv_escape(r.notes[i]) << "\n";
    }
  }
  write_atomic(path, text.str());
  const auto dot = path.find_last_of("./");
  const std::string kv_path = dot != std::string::npos && path[dot] == '.'
                                  ? path.substr(0, dot) + ".kv"
                                  : path + ".kv";
  write_atomic(kv_path, kv.str());
}

}  // namespace thermoshift
