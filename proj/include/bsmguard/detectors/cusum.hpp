#pragma once

#include <cstddef>
#include <vector>

#include "bsmguard/detectors/detector.hpp"

namespace bsmguard::detectors {

enum class CusumRule {
  adaptive,  // EWMA-estimated shift, log-likelihood-ratio increments (default)
  tabular,   // classical two-sided tabular chart with reference value K
};

struct CusumConfig {
  double delta = 1.0;     // shift of interest in sigmas, K = delta * sigma / 2
  double alpha = 0.025;   // EWMA weight
  double h_sigma = 5.0;   // H = h_sigma * sigma
  std::size_t warmup = 3;
  CusumRule rule = CusumRule::adaptive;
  double sigma_floor = 1e-8;
};

struct CusumState {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double target = 0.0;  // in-control mean, from the warm-up observations
  double sigma = 0.0;   // in-control standard deviation, from the warm-up observations
  double k = 0.0;       // delta * sigma / 2
  double h = 0.0;       // h_sigma * sigma
  double ewma = 0.0;
  std::size_t observations = 0;
  std::size_t alarms = 0;
  std::vector<double> warmup_values;
};

/// Two-sided CUSUM chart with target and scale estimated from the first
/// `warmup` observations.
///
/// Adaptive rule, with D_i = ewma_{i-1} - target and s_i = alpha * D_i:
///   C+_i = max(0, C+_{i-1} + (s_i / sigma) * ((y_i - target) - s_i / 2))
///   C-_i = max(0, C-_{i-1} - (s_i / sigma) * ((y_i - target) + s_i / 2))
///   ewma_i = alpha * ewma_{i-1} + (1 - alpha) * y_i
/// The increments are the Gaussian log-likelihood ratio of a mean shift of
/// +/- s_i, scaled by sigma so that C is in data units and is compared with
/// H = h_sigma * sigma.
///
/// Tabular rule:
///   C+_i = max(0, C+_{i-1} + y_i - target - K),  C-_i = max(0, C-_{i-1} + target - y_i - K)
///
/// An alarm is raised when either statistic exceeds H; both are then reset to 0.
class CusumDetector final : public Detector {
 public:
  explicit CusumDetector(const CusumConfig& config = {});

  DetectorDecision observe(double y) override;
  std::string_view name() const override { return "cusum"; }
  bool higher_score_is_attack() const override { return true; }

  const CusumState& state() const { return state_; }
  const CusumConfig& config() const { return config_; }

 private:
  void finish_warmup();

  CusumConfig config_;
  CusumState state_;
};

}  // namespace bsmguard::detectors
