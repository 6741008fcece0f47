#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dilated/error.hpp"

namespace dilated {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Homogeneous record set: one column list, rows of equal length.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    require(row.size() == columns.size(), ErrorKind::InvalidArgument,
            "table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                std::to_string(columns.size()));
    rows.push_back(std::move(row));
  }
};

/// Shortest-safe decimal: 17 significant digits round-trip every double.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.columns.size(); ++j) out += (j ? "," : "") + t.columns[j];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + format_cell(row[j]);
    out += "\n";
  }
  return out;
}

/// Splits CSV text into rows of fields (quoted fields with doubled quotes supported).
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      field += ch;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error(ErrorKind::Io, "write failed for " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline void emit_csv(const Table& t, const std::string& path) { write_file(path, to_csv(t)); }

/// x-y series for gnuplot: one block per series, separated by two blank lines.
struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

inline std::string to_plotdata(const std::vector<PlotSeries>& series) {
  std::string out;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (k) out += "\n\n";
    out += "# " + series[k].name + "\n";
    for (std::size_t i = 0; i < series[k].x.size(); ++i)
      out += format_number(series[k].x[i]) + " " + format_number(series[k].y[i]) + "\n";
  }
  return out;
}

inline void emit_plotdata(const std::vector<PlotSeries>& series, const std::string& path) {
  write_file(path, to_plotdata(series));
}

}  // namespace dilated
