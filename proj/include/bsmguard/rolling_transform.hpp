#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "bsmguard/bsm.hpp"

namespace bsmguard {

/// Variance of the control-variate series built from a window of speeds and
/// accelerations:
///
///   dS_j = S_j - S_{j-1},  dA_j = A_j - A_{j-1}
///   Z_j  = dS_j - c * (dA_j - mean(dA))
///   Y    = unbiased sample variance of Z
///
/// Both spans must have the same length (at least 3).
double control_variate_variance(std::span<const double> speeds, std::span<const double> accels,
                                double coefficient);

/// Sliding 10-sample window feeding control_variate_variance. One instance per
/// vehicle stream.
class RollingTransform {
 public:
  static constexpr std::size_t kWindow = 10;
  static constexpr double kDefaultCoefficient = 0.99;

  explicit RollingTransform(double coefficient = kDefaultCoefficient) : coefficient_(coefficient) {}

  /// Appends a sample; returns Y once the window holds kWindow samples.
  std::optional<double> push(double speed, double accel);
  std::optional<double> push(const AggregatedSample& s) { return push(s.avg_speed, s.avg_accel); }

  bool full() const { return count_ >= kWindow; }
  double coefficient() const { return coefficient_; }

 private:
  double coefficient_;
  std::array<double, kWindow> speeds_{};
  std::array<double, kWindow> accels_{};
  std::size_t head_ = 0;   // slot of the oldest sample once full
  std::size_t count_ = 0;
};

}  // namespace bsmguard
