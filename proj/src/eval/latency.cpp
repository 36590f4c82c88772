#include "bsmguard/eval/latency.hpp"

#include <algorithm>

#include "bsmguard/error.hpp"

namespace bsmguard::eval {

namespace {
constexpr double kEdge = 1e-9;
}

std::vector<sim::AttackWindow> attack_windows_from_labels(std::span<const double> times,
                                                          std::span<const Label> truth, double period) {
  if (times.size() != truth.size()) throw InputError("times and labels differ in length");
  std::vector<sim::AttackWindow> out;
  for (std::size_t i = 0; i < truth.size();) {
    if (!is_attack(truth[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < truth.size() && is_attack(truth[j + 1])) ++j;
    out.push_back({times[i], times[j] + period});
    i = j + 1;
  }
  return out;
}

LatencyStats detection_latency(std::span<const double> times, const std::vector<bool>& flags,
                               std::span<const sim::AttackWindow> windows) {
  if (times.size() != flags.size()) throw InputError("times and flags differ in length");
  LatencyStats s;
  double sum = 0.0;
  for (const auto& w : windows) {
    std::optional<double> delay;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (flags[i] && times[i] >= w.start - kEdge && times[i] < w.end - kEdge) {
        delay = std::max(0.0, times[i] - w.start);
        break;
      }
    }
    if (delay) {
      ++s.detected;
      sum += *delay;
      s.max = std::max(s.max, *delay);
    } else {
      ++s.undetected;
    }
    s.delay.push_back(delay);
  }
  if (s.detected > 0) s.mean = sum / static_cast<double>(s.detected);
  return s;
}

}  // namespace bsmguard::eval
