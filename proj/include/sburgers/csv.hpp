// Versioned CSV output and run manifests.
#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sburgers {

inline constexpr int kCsvSchema = 1;

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

using CsvCell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

/// Writes "# schema=1", then a header row, then one line per row().
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<CsvCell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// 64-bit FNV-1a of the cutoff and Littlewood-Paley profile parameters.
std::string profile_hash();

struct Manifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Writes manifest.json in `dir` (created if missing).
void write_manifest(const std::string& dir, const Manifest& manifest);

}  // namespace sburgers
