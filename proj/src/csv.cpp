#include "thresim/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace thresim::csv {

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return {buf, ptr};
}

void write_table(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);  // binary keeps \n on every platform
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c > 0) out << ',';
    out << table.header[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << row[c];
    }
    out << '\n';
  }
  if (!out.good()) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

int ParsedCsv::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return static_cast<int>(c);
  }
  return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

ParsedCsv read_numeric(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  ParsedCsv parsed;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + " is empty (missing header)");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  parsed.header = split_line(line);
  parsed.columns.resize(parsed.header.size());

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != parsed.header.size()) {
      throw std::runtime_error(path.string() + ": row " + std::to_string(row + 1) +
                               " has " + std::to_string(fields.size()) +
                               " fields, expected " +
                               std::to_string(parsed.header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double value = 0.0;
      const auto& f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw std::runtime_error(path.string() + ": bad numeric field '" + f + "'");
      }
      parsed.columns[c].push_back(value);
    }
    ++row;
  }
  return parsed;
}

std::string fnv1a64_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string() + " for hashing");
  }
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char chunk[4096];
  while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(chunk[i]);
      hash *= 0x100000001b3ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace thresim::csv
