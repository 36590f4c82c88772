#pragma once

#include <cstddef>

#include "bsmguard/detectors/detector.hpp"

namespace bsmguard::detectors {

struct BocpdConfig {
  double lambda = 0.01;  // hazard per interval (mean run length 100)
  double mu0 = 0.0;
  double kappa = 0.1;
  double alpha = 1e-5;
  double beta = 1e-5;
  double threshold = 0.0002;  // attack when the predictive density falls below this
  std::size_t warmup = 10;    // observations absorbed before decisions are issued
};

/// Normal-Inverse-Gamma posterior of the current run plus run bookkeeping.
struct BocpdState {
  double mu = 0.0;
  double kappa = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t run_length = 0;
  double run_mean = 0.0;  // mean of the observations of the current run
  std::size_t observations = 0;
  /// Posterior weight of "a new run starts here" versus "the run continues",
  /// using the hazard and the prior predictive for the new run.
  double changepoint_probability = 0.0;
};

/// Single-trajectory Bayesian online change-point detector.
///
/// Each observation is scored by the posterior predictive Student-t density
///   t_{2a}(mu, b(k+1)/(a k))
/// of the current run. A density below the threshold is an attack: the run
/// restarts (r = 1, run mean re-anchored to y) and the posterior is kept
/// as it was, so that a sustained false level keeps being flagged. Otherwise
/// the Normal-Inverse-Gamma posterior absorbs y by its conjugate update.
class Bocpd final : public Detector {
 public:
  explicit Bocpd(const BocpdConfig& config = {});

  DetectorDecision observe(double y) override;
  std::string_view name() const override { return "bocpd"; }
  bool higher_score_is_attack() const override { return false; }

  /// Log predictive density of y under the current posterior.
  double predictive_logpdf(double y) const;

  const BocpdState& state() const { return state_; }
  const BocpdConfig& config() const { return config_; }

 private:
  BocpdConfig config_;
  BocpdState state_;
};

}  // namespace bsmguard::detectors
