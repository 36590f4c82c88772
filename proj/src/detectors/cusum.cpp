#include "bsmguard/detectors/cusum.hpp"

#include <algorithm>
#include <cmath>

#include "bsmguard/error.hpp"

namespace bsmguard::detectors {

CusumDetector::CusumDetector(const CusumConfig& config) : config_(config) {
  if (config.warmup < 2) throw ParameterError("cusum: warm-up needs at least 2 observations");
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) throw ParameterError("cusum: alpha must lie in [0, 1]");
  if (!(config.h_sigma > 0.0) || !(config.delta >= 0.0)) {
    throw ParameterError("cusum: h_sigma must be positive and delta non-negative");
  }
  state_.warmup_values.reserve(config.warmup);
}

void CusumDetector::finish_warmup() {
  const auto& v = state_.warmup_values;
  const auto n = static_cast<double>(v.size());
  // Offsets from the first value keep a constant warm-up exact.
  const double anchor = v.front();
  double offset = 0.0;
  for (const double x : v) offset += x - anchor;
  const double mean = anchor + offset / n;
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);

  state_.target = mean;
  state_.sigma = std::max(std::sqrt(ss / (n - 1.0)), config_.sigma_floor);
  state_.k = config_.delta * state_.sigma / 2.0;
  state_.h = config_.h_sigma * state_.sigma;
  state_.ewma = state_.target;
}

DetectorDecision CusumDetector::observe(double y) {
  if (!std::isfinite(y)) throw InputError("cusum: non-finite observation");
  ++state_.observations;
  if (state_.warmup_values.size() < config_.warmup) {
    state_.warmup_values.push_back(y);
    if (state_.warmup_values.size() == config_.warmup) finish_warmup();
    return DetectorDecision{false, 0.0, false};
  }

  const double deviation = y - state_.target;
  if (config_.rule == CusumRule::adaptive) {
    const double shift = config_.alpha * (state_.ewma - state_.target);
    const double gain = shift / state_.sigma;
    state_.c_plus = std::max(0.0, state_.c_plus + gain * (deviation - shift / 2.0));
    state_.c_minus = std::max(0.0, state_.c_minus - gain * (deviation + shift / 2.0));
    // alpha * ewma + (1 - alpha) * y, written so a constant stream stays exact.
    state_.ewma += (1.0 - config_.alpha) * (y - state_.ewma);
  } else {
    state_.c_plus = std::max(0.0, state_.c_plus + deviation - state_.k);
    state_.c_minus = std::max(0.0, state_.c_minus - deviation - state_.k);
  }

  DetectorDecision decision;
  decision.warmed_up = true;
  decision.score = std::max(state_.c_plus, state_.c_minus);
  if (state_.c_plus > state_.h || state_.c_minus > state_.h) {
    decision.attack = true;
    ++state_.alarms;
    state_.c_plus = 0.0;
    state_.c_minus = 0.0;
  }
  return decision;
}

}  // namespace bsmguard::detectors
