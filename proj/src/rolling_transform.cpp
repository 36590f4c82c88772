#include "bsmguard/rolling_transform.hpp"

#include <vector>

#include "bsmguard/error.hpp"

namespace bsmguard {

double control_variate_variance(std::span<const double> speeds, std::span<const double> accels,
                                double coefficient) {
  if (speeds.size() != accels.size() || speeds.size() < 3) {
    throw ParameterError("control_variate_variance: need two equal windows of at least 3 samples");
  }
  const std::size_t m = speeds.size() - 1;
  std::array<double, RollingTransform::kWindow> ds_small{};
  std::array<double, RollingTransform::kWindow> da_small{};
  std::vector<double> ds_large;
  std::vector<double> da_large;
  double* ds = ds_small.data();
  double* da = da_small.data();
  if (m > ds_small.size()) {
    ds_large.resize(m);
    da_large.resize(m);
    ds = ds_large.data();
    da = da_large.data();
  }

  double da_mean = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    ds[j] = speeds[j + 1] - speeds[j];
    da[j] = accels[j + 1] - accels[j];
    da_mean += da[j];
  }
  da_mean /= static_cast<double>(m);

  double z_mean = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    ds[j] = ds[j] - coefficient * (da[j] - da_mean);  // reuse ds as Z
    z_mean += ds[j];
  }
  z_mean /= static_cast<double>(m);

  double ss = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = ds[j] - z_mean;
    ss += d * d;
  }
  return ss / static_cast<double>(m - 1);
}

std::optional<double> RollingTransform::push(double speed, double accel) {
  if (count_ < kWindow) {
    speeds_[count_] = speed;
    accels_[count_] = accel;
    ++count_;
    if (count_ < kWindow) return std::nullopt;
  } else {
    speeds_[head_] = speed;
    accels_[head_] = accel;
    head_ = (head_ + 1) % kWindow;
  }
  std::array<double, kWindow> s{};
  std::array<double, kWindow> a{};
  for (std::size_t i = 0; i < kWindow; ++i) {
    s[i] = speeds_[(head_ + i) % kWindow];
    a[i] = accels_[(head_ + i) % kWindow];
  }
  return control_variate_variance(s, a, coefficient_);
}

}  // namespace bsmguard
