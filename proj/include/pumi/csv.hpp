#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "pumi/error.hpp"
#include "pumi/geometry.hpp"

namespace pumi {

/// Shortest round-trip text for a double (17 significant digits), used by
/// every CSV writer so outputs are byte-stable.
inline std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_cell(std::string_view cell, const std::string& path, std::size_t line_no) {
  cell = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    raise(errc::io_error, path + ": line " + std::to_string(line_no) + ": cell '" +
                              std::string(cell) + "' is not a number");
  return value;
}

/// Reads a CSV with the exact header given; returns one row per line as
/// doubles. Blank trailing lines are ignored; anything else malformed is an
/// error citing the line number.
inline std::vector<std::vector<double>> read_table(const std::string& path,
                                                   const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) raise(errc::io_error, path + ": empty file");
  ++line_no;
  {
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      raise(errc::io_error, path + ": line 1: expected " + std::to_string(header.size()) +
                                " header columns");
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(cells[i]) != header[i])
        raise(errc::io_error, path + ": line 1: expected header column '" + header[i] +
                                  "', got '" + std::string(trim(cells[i])) + "'");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      raise(errc::io_error, path + ": line " + std::to_string(line_no) + ": expected " +
                                std::to_string(header.size()) + " columns, got " +
                                std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) row.push_back(parse_cell(cell, path, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Reads scattered data from a CSV with header x,y,f.
inline std::pair<std::vector<Point2>, std::vector<double>> read_xyf_csv(const std::string& path) {
  const auto rows = detail::read_table(path, {"x", "y", "f"});
  std::vector<Point2> sites;
  std::vector<double> values;
  sites.reserve(rows.size());
  values.reserve(rows.size());
  for (const auto& row : rows) {
    sites.push_back(Point2{row[0], row[1]});
    values.push_back(row[2]);
  }
  return {std::move(sites), std::move(values)};
}

/// Reads query points from a CSV with header x,y.
inline std::vector<Point2> read_xy_csv(const std::string& path) {
  const auto rows = detail::read_table(path, {"x", "y"});
  std::vector<Point2> points;
  points.reserve(rows.size());
  for (const auto& row : rows) points.push_back(Point2{row[0], row[1]});
  return points;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) raise(errc::io_error, "cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
    path_ = path;
  }

  void row(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << format_double(cells[i]);
    out_ << '\n';
  }

  /// Writes a preformatted line (for rows with non-numeric cells).
  void raw_row(const std::string& line) { out_ << line << '\n'; }

  void close() {
    out_.close();
    if (!out_) raise(errc::io_error, "failed writing " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace pumi
