#include "bsmguard/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "bsmguard/error.hpp"

namespace bsmguard {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw ParameterError("format_double: conversion failed");
  return std::string(buf.data(), end);
}

double parse_double(std::string_view text, std::string_view what) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw DataError(std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& message) {
  throw DataError("line " + std::to_string(line) + ": " + message);
}

}  // namespace

BsmCsvReader::BsmCsvReader(std::istream& in) : in_(in) {
  if (!std::getline(in_, buffer_)) throw DataError("line 1: missing header");
  ++line_;
  if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
  if (buffer_.size() >= 3 && buffer_.compare(0, 3, "\xEF\xBB\xBF") == 0) buffer_.erase(0, 3);
  if (buffer_ != kBsmCsvHeader) {
    fail_at(line_, "expected header '" + std::string(kBsmCsvHeader) + "'");
  }
}

std::optional<BsmRecord> BsmCsvReader::next() {
  while (std::getline(in_, buffer_)) {
    ++line_;
    if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    if (buffer_.empty()) continue;
    const auto fields = split_fields(buffer_);
    if (fields.size() != 5) fail_at(line_, "expected 5 fields, got " + std::to_string(fields.size()));
    BsmRecord record;
    try {
      record.t = parse_double(fields[0], "t");
      record.vehicle_id = std::string(fields[1]);
      record.speed = parse_double(fields[2], "speed_mps");
      record.accel = parse_double(fields[3], "accel_mps2");
    } catch (const DataError& e) {
      fail_at(line_, e.what());
    }
    if (fields[4] == "0") {
      record.label = Label::no_attack;
    } else if (fields[4] == "1") {
      record.label = Label::attack;
    } else {
      fail_at(line_, "label must be 0 or 1");
    }
    if (record.speed < 0.0) fail_at(line_, "negative speed");
    return record;
  }
  return std::nullopt;
}

std::vector<BsmRecord> read_bsm_csv(std::istream& in) {
  BsmCsvReader reader(in);
  std::vector<BsmRecord> records;
  while (auto record = reader.next()) records.push_back(std::move(*record));
  return records;
}

std::vector<BsmRecord> read_bsm_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_bsm_csv(in);
}

void write_bsm_csv_header(std::ostream& out) { out << kBsmCsvHeader << '\n'; }

void write_bsm_csv_row(std::ostream& out, const BsmRecord& record) {
  out << format_double(record.t) << ',' << record.vehicle_id << ',' << format_double(record.speed)
      << ',' << format_double(record.accel) << ',' << to_int(record.label) << '\n';
}

void write_bsm_csv(std::ostream& out, std::span<const BsmRecord> records) {
  write_bsm_csv_header(out);
  for (const auto& record : records) write_bsm_csv_row(out, record);
}

}  // namespace bsmguard
