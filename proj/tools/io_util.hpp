#pragma once

// File helpers for the CLI: deterministic number formatting, the output
// header block, and the complex-matrix CSV reader.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acv/types.hpp"

namespace acv::cli {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hash_hex(const nlohmann::json& config) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

struct OutputMeta {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;

  std::string config_hash() const { return hash_hex(config); }

  void write_csv_header(std::ostream& os) const {
    os << "# tool: acv " << ACV_VERSION << "\n";
    os << "# command: " << command << "\n";
    os << "# config-hash: " << config_hash() << "\n";
    os << "# seed: " << seed << "\n";
  }

  nlohmann::json json_block() const {
    return {{"tool", "acv"},
            {"version", ACV_VERSION},
            {"command", command},
            {"config_hash", config_hash()},
            {"seed", seed}};
  }
};

inline std::ofstream open_output(const std::filesystem::path& dir,
                                 const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / name, std::ios::trunc);
  if (!os)
    fail(ErrorCode::invalid_config, "cannot open output file " + name);
  return os;
}

inline void write_json(const std::filesystem::path& dir,
                       const std::string& name, const nlohmann::json& body) {
  std::ofstream os = open_output(dir, name);
  os << body.dump(2) << "\n";
}

/// Reads an N x n complex matrix stored as re/im column pairs (2n numeric
/// fields per row). '#' lines are comments. Parse failures carry the row and
/// column position.
inline ComplexMatrix read_matrix_csv(const std::string& path, int rows,
                                     int cols) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::parse_error, "cannot open input file " + path);
  ComplexMatrix m(rows, cols);
  int row = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (row >= rows)
      fail(ErrorCode::parse_error,
           path + ": more than " + std::to_string(rows) + " data rows");
    std::stringstream ss(line);
    std::string field;
    std::vector<double> values;
    int col = 0;
    while (std::getline(ss, field, ',')) {
      ++col;
      try {
        std::size_t used = 0;
        double v = std::stod(field, &used);
        while (used < field.size() && std::isspace(field[used])) ++used;
        if (used != field.size()) throw std::invalid_argument(field);
        values.push_back(v);
      } catch (const std::exception&) {
        fail(ErrorCode::parse_error, path + ": line " + std::to_string(lineno) +
                                         ", field " + std::to_string(col) +
                                         ": not a number: '" + field + "'");
      }
    }
    if (static_cast<int>(values.size()) != 2 * cols)
      fail(ErrorCode::parse_error,
           path + ": line " + std::to_string(lineno) + ": expected " +
               std::to_string(2 * cols) + " fields (re/im pairs), got " +
               std::to_string(values.size()));
    for (int j = 0; j < cols; ++j)
      m(row, j) = Complex(values[2 * j], values[2 * j + 1]);
    ++row;
  }
  if (row != rows)
    fail(ErrorCode::parse_error, path + ": expected " + std::to_string(rows) +
                                     " data rows, got " + std::to_string(row));
  return m;
}

}  // namespace acv::cli
