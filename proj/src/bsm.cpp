#include "bsmguard/bsm.hpp"

#include <cmath>
#include <sstream>

#include "bsmguard/error.hpp"

namespace bsmguard {

StreamAggregator::StreamAggregator(double window) : window_(window), per_second_(0.0) {
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw ParameterError("aggregation window must be positive");
  }
  const double inverse = 1.0 / window;
  if (std::abs(inverse - std::round(inverse)) < 1e-9) per_second_ = std::round(inverse);
}

std::int64_t StreamAggregator::window_index(double t) const {
  // Window k covers (k*w - w, k*w]; the tolerance absorbs decimal timestamps
  // such as 0.30000000000000004.
  return static_cast<std::int64_t>(std::ceil(t / window_ - 1e-9));
}

double StreamAggregator::window_end(std::int64_t index) const {
  if (per_second_ > 0.0) return static_cast<double>(index) / per_second_;
  return static_cast<double>(index) * window_;
}

AggregatedSample StreamAggregator::close(const Pending& p) const {
  const auto n = static_cast<double>(p.count);
  return AggregatedSample{window_end(p.index), p.speed_sum / n, p.accel_sum / n,
                          p.attack ? Label::attack : Label::no_attack};
}

void StreamAggregator::reset_window(Pending& p) {
  p.speed_sum = 0.0;
  p.accel_sum = 0.0;
  p.count = 0;
  p.attack = false;
  p.open = false;
}

std::optional<VehicleSample> StreamAggregator::push(const BsmRecord& record) {
  const std::size_t position = records_seen_++;
  if (!std::isfinite(record.t) || !std::isfinite(record.speed) || !std::isfinite(record.accel)) {
    std::ostringstream msg;
    msg << "record #" << position << " (vehicle " << record.vehicle_id << "): non-finite field";
    throw DataError(msg.str());
  }
  auto [it, inserted] = pending_.try_emplace(record.vehicle_id);
  Pending& p = it->second;
  if (inserted) order_.push_back(record.vehicle_id);

  if (p.seen && !(record.t > p.last_t)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "record #" << position << " (vehicle " << record.vehicle_id << ", t=" << record.t
        << ") is not after the previous timestamp " << p.last_t << " of that vehicle";
    throw DataError(msg.str());
  }

  const std::int64_t index = window_index(record.t);
  std::optional<VehicleSample> emitted;
  if (p.open && index != p.index) {
    emitted = VehicleSample{record.vehicle_id, close(p)};
    reset_window(p);
  }
  if (!p.open) {
    p.open = true;
    p.index = index;
  }
  p.seen = true;
  p.last_t = record.t;
  p.speed_sum += record.speed;
  p.accel_sum += record.accel;
  p.attack = p.attack || is_attack(record.label);
  ++p.count;
  return emitted;
}

std::vector<VehicleSample> StreamAggregator::flush() {
  std::vector<VehicleSample> out;
  for (const auto& id : order_) {
    Pending& p = pending_.at(id);
    if (p.open && p.count > 0) {
      out.push_back(VehicleSample{id, close(p)});
      reset_window(p);
    }
  }
  return out;
}

std::vector<VehicleSeries> aggregate(std::span<const BsmRecord> records, double window) {
  StreamAggregator aggregator(window);
  std::vector<VehicleSeries> series;
  std::unordered_map<std::string, std::size_t> slot;
  auto append = [&](VehicleSample&& vs) {
    auto [it, inserted] = slot.try_emplace(vs.vehicle_id, series.size());
    if (inserted) series.push_back(VehicleSeries{vs.vehicle_id, {}});
    series[it->second].samples.push_back(vs.sample);
  };
  for (const auto& record : records) {
    // Register vehicles in first-appearance order even before their first window closes.
    if (slot.try_emplace(record.vehicle_id, series.size()).second) {
      series.push_back(VehicleSeries{record.vehicle_id, {}});
    }
    if (auto done = aggregator.push(record)) append(std::move(*done));
  }
  for (auto& vs : aggregator.flush()) append(std::move(vs));
  return series;
}

}  // namespace bsmguard
