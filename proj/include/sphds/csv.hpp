#ifndef SPHDS_CSV_HPP
#define SPHDS_CSV_HPP

// Minimal RFC 4180 reader: comma separated, double-quoted fields with ""
// escapes, one record per line. Enough for the tabular sources we ingest.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sphds/error.hpp"

namespace sphds::csv {

inline std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Parses a numeric field. Empty or unparsable fields yield nullopt.
inline std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(Errc::missing_column, "CSV has no column named '" + name + "'");
  }
};

/// Reads a whole CSV stream. Without a header row the columns are named
/// V1, V2, ... after the widest record.
inline Table read(std::istream& in, bool has_header = true) {
  Table t;
  std::string line;
  bool first = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (first && has_header) {
      for (auto& f : split_record(line)) t.header.emplace_back(trim(f));
      first = false;
      continue;
    }
    first = false;
    if (trim(line).empty()) continue;
    t.rows.push_back(split_record(line));
    width = std::max(width, t.rows.back().size());
  }
  if (has_header && t.header.empty()) throw Error(Errc::parse, "CSV input is empty");
  if (!has_header) {
    for (std::size_t i = 0; i < width; ++i) t.header.push_back("V" + std::to_string(i + 1));
  }
  return t;
}

inline Table read_file(const std::string& path, bool has_header = true) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  return read(in, has_header);
}

}  // namespace sphds::csv

#endif  // SPHDS_CSV_HPP
