#include "bsmguard/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bsmguard/error.hpp"

namespace bsmguard {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view text, char separator) {
  std::vector<std::string> items;
  if (trim(text).empty()) return items;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(separator, start);
    items.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return items;
}

Config Config::parse(std::istream& in, std::string source) {
  Config config;
  config.source_ = std::move(source);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(config.source_ + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(config.source_ + ":" + std::to_string(number) + ": empty key");
    }
    if (config.entries_.count(key) != 0) {
      throw ConfigError(config.source_ + ":" + std::to_string(number) + ": duplicate key '" + key +
                        "' (first set on line " + std::to_string(config.entries_[key].line) + ")");
    }
    config.entries_[std::move(key)] = Entry{std::move(value), number};
  }
  return config;
}

Config Config::parse_string(std::string_view text, std::string source) {
  std::istringstream in{std::string(text)};
  return parse(in, std::move(source));
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in, path);
}

bool Config::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

void Config::set(std::string key, std::string value) {
  entries_[std::move(key)] = Entry{std::move(value), 0};
}

void Config::fail(std::string_view key, std::string_view message) const {
  std::ostringstream msg;
  msg << source_;
  if (auto it = entries_.find(key); it != entries_.end() && it->second.line > 0) {
    msg << ':' << it->second.line;
  }
  msg << ": key '" << key << "': " << message;
  throw ConfigError(msg.str());
}

std::optional<std::string> Config::get_string(std::string_view key) const {
  if (auto it = entries_.find(key); it != entries_.end()) return it->second.value;
  return std::nullopt;
}

std::string Config::require_string(std::string_view key) const {
  if (auto value = get_string(key)) return *value;
  throw ConfigError(source_ + ": missing required key '" + std::string(key) + "'");
}

namespace {

std::optional<double> to_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> to_u64(std::string_view text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

}  // namespace

double Config::get_double(std::string_view key, double fallback) const {
  const auto text = get_string(key);
  if (!text) return fallback;
  if (auto value = to_double(*text)) return *value;
  fail(key, "expected a number, got '" + *text + "'");
}

double Config::require_double(std::string_view key) const {
  const std::string text = require_string(key);
  if (auto value = to_double(text)) return *value;
  fail(key, "expected a number, got '" + text + "'");
}

std::uint64_t Config::get_u64(std::string_view key, std::uint64_t fallback) const {
  const auto text = get_string(key);
  if (!text) return fallback;
  if (auto value = to_u64(*text)) return *value;
  fail(key, "expected a non-negative integer, got '" + *text + "'");
}

std::uint64_t Config::require_u64(std::string_view key) const {
  const std::string text = require_string(key);
  if (auto value = to_u64(text)) return *value;
  fail(key, "expected a non-negative integer, got '" + text + "'");
}

std::vector<double> Config::get_double_list(std::string_view key, std::vector<double> fallback) const {
  const auto text = get_string(key);
  if (!text) return fallback;
  std::vector<double> values;
  for (const auto& item : split_list(*text)) {
    auto value = to_double(item);
    if (!value) fail(key, "expected a comma-separated list of numbers, got '" + item + "'");
    values.push_back(*value);
  }
  if (values.empty()) fail(key, "empty list");
  return values;
}

std::vector<std::string> Config::get_string_list(std::string_view key,
                                                 std::vector<std::string> fallback) const {
  const auto text = get_string(key);
  if (!text) return fallback;
  auto items = split_list(*text);
  if (items.empty()) fail(key, "empty list");
  return items;
}

}  // namespace bsmguard
