#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bsmguard::eval {

inline constexpr std::size_t kTimingWarmRun = 100;

struct TimingStats {
  std::size_t samples = 0;  // timed calls, after the warm run
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p99_ms = 0.0;      // nearest-rank
};

/// Calls step(i) for i in [0, n) and times each call with a monotonic clock.
/// The first `warm_run` calls are executed but not counted.
TimingStats time_inference(const std::function<void(std::size_t)>& step, std::size_t n,
                           std::size_t warm_run = kTimingWarmRun);

/// Summary of raw per-call durations in milliseconds.
TimingStats summarize_timings(std::vector<double> ms);

}  // namespace bsmguard::eval
