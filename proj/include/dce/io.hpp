#pragma once

// Table container and the CSV / JSON emitters shared by the CLI. Every file
// carries a metadata block (tool version, full parameter echo, tolerances)
// so that re-running the echoed command reproduces it bit-identically.
// Numbers are printed as %.16e (17 significant digits): lossless for double.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dce/core.hpp"

namespace dce {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }
  void add_meta(const std::string& k, double v) { meta.emplace_back(k, format_g17(v)); }
};

namespace detail {

inline void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
    f << content;
    if (!f.good()) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline std::string json_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '"': o += "\\\""; break;
      case '\\': o += "\\\\"; break;
      case '\n': o += "\\n"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace detail

/// CSV: '#'-prefixed metadata lines, then a header row, then data rows.
inline void write_csv(const std::string& path, const Table& t) {
  std::ostringstream out;
  for (const auto& [k, v] : t.meta) out << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_g17(row[i]);
    out << "\n";
  }
  detail::atomic_write(path, out.str());
}

/// JSON: single object {meta, columns, rows}; values printed with the same
/// %.16e format as the CSV emitter so the two agree digit for digit.
inline void write_json(const std::string& path, const Table& t) {
  std::ostringstream out;
  out << "{\n  \"meta\": {";
  for (std::size_t i = 0; i < t.meta.size(); ++i) {
    out << (i ? ",\n    " : "\n    ") << '"' << detail::json_escape(t.meta[i].first) << "\": \""
        << detail::json_escape(t.meta[i].second) << '"';
  }
  out << "\n  },\n  \"columns\": [";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? ", " : "") << '"' << detail::json_escape(t.columns[i]) << '"';
  out << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << (r ? ",\n    " : "\n    ") << "[";
    for (std::size_t i = 0; i < t.rows[r].size(); ++i) out << (i ? ", " : "") << format_g17(t.rows[r][i]);
    out << "]";
  }
  out << "\n  ]\n}\n";
  detail::atomic_write(path, out.str());
}

/// Parse a CSV file produced by write_csv back into a Table.
inline Table read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  Table t;
  std::string line;
  bool header_done = false;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find(" = ");
      if (eq != std::string::npos) t.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header_done) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
      header_done = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace dce
