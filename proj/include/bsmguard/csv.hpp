#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bsmguard/bsm.hpp"

namespace bsmguard {

inline constexpr std::string_view kBsmCsvHeader = "t,vehicle_id,speed_mps,accel_mps2,label";

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Parses a complete decimal field; throws DataError mentioning `what` on failure.
double parse_double(std::string_view text, std::string_view what);

/// Line-oriented reader for the BSM CSV schema. Errors carry the 1-based line number.
class BsmCsvReader {
 public:
  explicit BsmCsvReader(std::istream& in);

  /// Next record, or nullopt at end of input.
  std::optional<BsmRecord> next();

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::string buffer_;
};

std::vector<BsmRecord> read_bsm_csv(std::istream& in);
std::vector<BsmRecord> read_bsm_csv_file(const std::string& path);

void write_bsm_csv_header(std::ostream& out);
void write_bsm_csv_row(std::ostream& out, const BsmRecord& record);
void write_bsm_csv(std::ostream& out, std::span<const BsmRecord> records);

}  // namespace bsmguard
