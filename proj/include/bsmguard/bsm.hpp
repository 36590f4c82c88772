#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bsmguard {

enum class Label : std::uint8_t { no_attack = 0, attack = 1 };

constexpr bool is_attack(Label l) { return l == Label::attack; }
constexpr int to_int(Label l) { return static_cast<int>(l); }

/// Native broadcast period of a basic safety message stream (10 Hz).
inline constexpr double kBsmPeriod = 0.1;

/// One broadcast basic safety message, reduced to the fields the detectors use.
struct BsmRecord {
  double t = 0.0;  // seconds
  std::string vehicle_id;
  double speed = 0.0;  // m/s
  double accel = 0.0;  // m/s^2
  Label label = Label::no_attack;
};

/// Mean of the records of one vehicle falling in the window (t - w, t].
struct AggregatedSample {
  double t = 0.0;
  double avg_speed = 0.0;
  double avg_accel = 0.0;
  Label label = Label::no_attack;
};

struct VehicleSeries {
  std::string vehicle_id;
  std::vector<AggregatedSample> samples;
};

/// Aggregated sample tagged with the vehicle it belongs to.
struct VehicleSample {
  std::string vehicle_id;
  AggregatedSample sample;
};

/// Incremental per-vehicle window averaging, as done at the roadside unit.
///
/// Records of each vehicle must arrive with strictly increasing timestamps.
/// A window is emitted as soon as a later record of the same vehicle opens a
/// new window, so memory is bounded by the number of vehicles.
class StreamAggregator {
 public:
  explicit StreamAggregator(double window = kBsmPeriod);

  /// Feeds one record. Returns the previous window of that vehicle if the
  /// record closed it. Throws DataError on a non-increasing timestamp.
  std::optional<VehicleSample> push(const BsmRecord& record);

  /// Emits all still-open windows, in order of vehicle first appearance.
  std::vector<VehicleSample> flush();

  double window() const { return window_; }

 private:
  struct Pending {
    std::int64_t index = 0;
    double last_t = 0.0;
    double speed_sum = 0.0;
    double accel_sum = 0.0;
    std::size_t count = 0;
    bool attack = false;
    bool open = false;
    bool seen = false;
  };

  std::int64_t window_index(double t) const;
  double window_end(std::int64_t index) const;
  AggregatedSample close(const Pending& p) const;
  static void reset_window(Pending& p);

  double window_;
  double per_second_;  // 1/window when that is an integer, else 0
  std::size_t records_seen_ = 0;
  std::vector<std::string> order_;
  std::unordered_map<std::string, Pending> pending_;
};

/// Batch aggregation of a record stream; one series per vehicle in order of
/// first appearance. Throws DataError naming the first out-of-order record.
std::vector<VehicleSeries> aggregate(std::span<const BsmRecord> records, double window = kBsmPeriod);

}  // namespace bsmguard
