// Flat key=value run configuration with typed getters.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sburgers {

class Config {
 public:
  Config() = default;
  explicit Config(std::map<std::string, std::string> entries) : entries_(std::move(entries)) {}

  /// Parses `key = value` lines; '#' starts a comment. Malformed lines raise UsageError.
  static Config parse(const std::string& text);
  static Config from_file(const std::string& path);

  /// Later sources win: entries of `other` replace ours.
  void merge(const Config& other);
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  /// UsageError naming the first key not in `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Comma-separated lists.
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::int64_t> get_ints(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> entries_;
};

}  // namespace sburgers
