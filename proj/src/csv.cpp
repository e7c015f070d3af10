#include "sburgers/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "sburgers/error.hpp"
#include "sburgers/spectral.hpp"

#ifndef SBURGERS_VERSION
#define SBURGERS_VERSION "unknown"
#endif

namespace sburgers {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()) {
  if (!out_) throw UsageError("out", "cannot write '" + path + "'");
  out_ << "# schema=" << kCsvSchema << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_) throw ContractError("CsvWriter: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [this](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_double(v);
          } else {
            out_ << v;
          }
        },
        cells[i]);
  }
  out_ << '\n';
  out_.flush();
}

std::string profile_hash() {
  std::ostringstream desc;
  desc << "phi=exp(-1/s);chi:3/4,4/3;rho=chi(x/2)-chi(x);h=psi(2r-1);";
  CutoffProfile cutoff;
  for (int i = 0; i <= 64; ++i) {
    const double x = i / 32.0;
    desc << format_double(profile::chi(x)) << ',' << format_double(cutoff.high(x)) << ';';
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : desc.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const std::string& dir, const Manifest& manifest) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json j;
  j["schema"] = kCsvSchema;
  j["command"] = manifest.command;
  j["version"] = SBURGERS_VERSION;
  j["seed"] = manifest.seed;
  j["threads"] = manifest.threads;
  j["profile_hash"] = profile_hash();
  j["config"] = manifest.config;
  const std::string path = (std::filesystem::path(dir) / "manifest.json").string();
  std::ofstream out(path);
  if (!out) throw UsageError("out", "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace sburgers
