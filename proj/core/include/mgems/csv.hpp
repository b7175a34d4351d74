#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace mgems::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws IoError when absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::size_t col) const;
  long long integer(std::size_t row, std::size_t col) const;
};

/// Reads a comma-separated file with one header line. Blank lines are skipped.
Table read(const std::string& path);

/// Checks that the header equals `expected` exactly.
void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::string& path);

/// Shortest decimal text that round-trips to the same double.
std::string format(double value);

/// Opens `path` for writing, creating parent directories.
std::ofstream open_for_write(const std::string& path);

double parse_double(std::string_view text);

}  // namespace mgems::csv
