#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bsmguard/bsm.hpp"

namespace bsmguard {

inline constexpr double kStdevFloor = 1e-12;

/// Per-feature location/scale fitted on a training split.
struct StandardizationParams {
  std::vector<double> mean;
  std::vector<double> stdev;   // population standard deviation, floored at kStdevFloor
  std::vector<bool> floored;   // true where the feature was constant

  std::size_t features() const { return mean.size(); }
};

/// Fits on a row-major matrix with `n_features` columns. Constant features get
/// their stdev floored and a warning on stderr.
StandardizationParams fit_standardizer(std::span<const double> rows, std::size_t n_features);

/// Fits on (avg_speed, avg_accel).
StandardizationParams fit_standardizer(std::span<const AggregatedSample> samples);

/// (x - mean) / stdev, per feature.
std::vector<double> apply_standardizer(const StandardizationParams& params, std::span<const double> x);

/// In-place transform of a row-major matrix.
void standardize_rows(const StandardizationParams& params, std::span<double> rows);

}  // namespace bsmguard
