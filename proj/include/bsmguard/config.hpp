#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bsmguard {

/// Flat `key = value` configuration. Lines starting with '#' are comments.
/// Every entry remembers the line it came from so diagnostics can point at it.
class Config {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static Config parse(std::istream& in, std::string source = "<config>");
  static Config parse_string(std::string_view text, std::string source = "<string>");
  static Config load(const std::string& path);

  bool has(std::string_view key) const;
  void set(std::string key, std::string value);

  std::optional<std::string> get_string(std::string_view key) const;
  std::string require_string(std::string_view key) const;

  double get_double(std::string_view key, double fallback) const;
  double require_double(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
  std::uint64_t require_u64(std::string_view key) const;
  std::size_t get_size(std::string_view key, std::size_t fallback) const {
    return static_cast<std::size_t>(get_u64(key, fallback));
  }

  /// Comma-separated list of numbers.
  std::vector<double> get_double_list(std::string_view key, std::vector<double> fallback) const;
  std::vector<std::string> get_string_list(std::string_view key, std::vector<std::string> fallback) const;

  const std::string& source() const { return source_; }
  const std::map<std::string, Entry, std::less<>>& entries() const { return entries_; }

  /// "<source>:<line>: key '<key>': <message>"
  [[noreturn]] void fail(std::string_view key, std::string_view message) const;

 private:
  std::string source_;
  std::map<std::string, Entry, std::less<>> entries_;
};

std::vector<std::string> split_list(std::string_view text, char separator = ',');
std::string trim(std::string_view text);

}  // namespace bsmguard
