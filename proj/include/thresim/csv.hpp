#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

// CSV conventions: UTF-8, one header row, shortest round-trip decimal floats,
// Unix newlines.

namespace thresim::csv {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

void write_table(const std::filesystem::path& path, const Table& table);

struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // column-major

  std::int64_t n_rows() const {
    return columns.empty() ? 0 : static_cast<std::int64_t>(columns[0].size());
  }
  int column_index(const std::string& name) const;  // -1 when absent
};

/// Reads a numeric CSV written by write_table. Throws std::runtime_error on
/// malformed input.
ParsedCsv read_numeric(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a file, as 16 hex characters.
std::string fnv1a64_hex(const std::filesystem::path& path);

}  // namespace thresim::csv
