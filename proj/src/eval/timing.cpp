#include "bsmguard/eval/timing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

namespace bsmguard::eval {

TimingStats summarize_timings(std::vector<double> ms) {
  TimingStats s;
  s.samples = ms.size();
  if (ms.empty()) return s;
  std::sort(ms.begin(), ms.end());
  double sum = 0.0;
  for (double v : ms) sum += v;
  s.mean_ms = sum / static_cast<double>(ms.size());
  const std::size_t mid = ms.size() / 2;
  s.median_ms = ms.size() % 2 == 1 ? ms[mid] : (ms[mid - 1] + ms[mid]) / 2.0;
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(ms.size())));
  s.p99_ms = ms[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

TimingStats time_inference(const std::function<void(std::size_t)>& step, std::size_t n, std::size_t warm_run) {
  using clock = std::chrono::steady_clock;
  std::vector<double> ms;
  ms.reserve(n > warm_run ? n - warm_run : 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto start = clock::now();
    step(i);
    const auto stop = clock::now();
    if (i >= warm_run) ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  return summarize_timings(std::move(ms));
}

}  // namespace bsmguard::eval
