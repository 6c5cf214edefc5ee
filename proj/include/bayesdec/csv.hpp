#pragma once

// Minimal comma-separated reader/writer for the numeric schemas this tool
// speaks (datasets, draws, curves). No quoting; cells may not contain commas.
// Files ending in .gz are decompressed transparently on read.

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "bayesdec/error.hpp"

namespace bayesdec::csv {

inline bool has_gz_extension(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

inline std::string read_file(const std::string& path) {
  if (has_gz_extension(path)) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (!gz) throw IoError("cannot open '" + path + "'");
    std::string out;
    char buf[1 << 16];
    int got;
    while ((got = gzread(gz, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(got));
    const bool bad = got < 0;
    gzclose(gz);
    if (bad) throw IoError("gzip read error in '" + path + "'");
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return out;
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  cells.push_back(cell);
  // trim surrounding spaces
  for (auto& c : cells) {
    std::size_t b = c.find_first_not_of(" \t");
    std::size_t e = c.find_last_not_of(" \t");
    c = (b == std::string::npos) ? std::string() : c.substr(b, e - b + 1);
  }
  return cells;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // raw cells, header excluded
};

// Reads a headered CSV. Rows whose cell count differs from the header are
// rejected with their 1-based file line number.
inline Table read_table(const std::string& path) {
  const std::string text = read_file(path);
  Table table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    const std::string line =
        (eol == std::string::npos) ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (line.empty() || line == "\r") {
      if (eol == std::string::npos) break;
      continue;
    }
    if (!line.empty() && line[0] == '#') continue;  // footer/comment lines
    auto cells = split_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      if (table.header.empty() || (table.header.size() == 1 && table.header[0].empty()))
        throw ValidationError(path + ": missing header row");
    } else {
      if (cells.size() != table.header.size())
        throw ValidationError(path + ": row " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(table.header.size()));
      table.rows.push_back(std::move(cells));
    }
  }
  if (table.header.empty()) throw ValidationError(path + ": missing header row");
  return table;
}

inline std::optional<double> parse_double(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) return std::nullopt;
  return v;
}

inline std::optional<long long> parse_int(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const long long v = std::strtoll(cell.c_str(), &end, 10);
  if (end != cell.c_str() + cell.size()) return std::nullopt;
  return v;
}

// 17 significant digits: enough to round-trip any double through text.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace bayesdec::csv
