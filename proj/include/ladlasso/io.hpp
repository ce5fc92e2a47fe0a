#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ladlasso/error.hpp"
#include "ladlasso/model.hpp"

namespace ladlasso {

// Full-precision scientific notation used for every number the tools print.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

// Header `x1,...,xd,y`, then one data point per line. Errors name the 1-based line and column.
inline Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](std::size_t col, const std::string& what) -> InvalidInput {
    return InvalidInput("dataset CSV line " + std::to_string(line_no) +
                        (col ? ", column " + std::to_string(col) : std::string()) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::trim(line).empty()) break;
  }
  if (line_no == 0 || detail::trim(line).empty()) throw InvalidInput("dataset CSV is empty");
  const auto header = detail::split_commas(line);
  if (header.size() < 2) throw fail(0, "header needs at least one x column and a y column");
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j)
    if (header[j] != "x" + std::to_string(j + 1))
      throw fail(j + 1, "expected header 'x" + std::to_string(j + 1) + "', found '" + std::string(header[j]) + "'");
  if (header[d] != "y") throw fail(d + 1, "expected header 'y', found '" + std::string(header[d]) + "'");

  std::vector<double> xs;
  Vector y;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_commas(line);
    if (cells.size() != d + 1)
      throw fail(0, "expected " + std::to_string(d + 1) + " fields, found " + std::to_string(cells.size()));
    for (std::size_t c = 0; c <= d; ++c) {
      double v = 0.0;
      const auto cell = cells[c];
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc() || ptr != last) throw fail(c + 1, "not a number: '" + std::string(cell) + "'");
      if (!std::isfinite(v)) throw fail(c + 1, "non-finite value");
      if (c < d)
        xs.push_back(v);
      else
        y.push_back(v);
    }
  }
  if (y.empty()) throw InvalidInput("dataset CSV has a header but no data rows");
  Matrix x(y.size(), d);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) x(i, j) = xs[i * d + j];
  return Dataset(std::move(x), std::move(y));
}

inline Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open dataset file '" + path + "'");
  return read_dataset_csv(in);
}

inline void write_dataset_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t j = 0; j < data.d(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  for (std::size_t i = 0; i < data.m(); ++i) {
    for (std::size_t j = 0; j < data.d(); ++j) out << format_number(data.x()(i, j)) << ',';
    out << format_number(data.y()[i]) << '\n';
  }
}

}  // namespace ladlasso
