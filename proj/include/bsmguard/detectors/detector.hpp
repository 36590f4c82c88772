#pragma once

#include <string_view>

namespace bsmguard::detectors {

/// Verdict for one observation.
struct DetectorDecision {
  bool attack = false;
  double score = 0.0;      // detector-specific, see Detector::higher_score_is_attack()
  bool warmed_up = false;  // false while the detector is still seeding itself
};

/// Sequential change-point detector. A single instance must not receive
/// concurrent observe() calls; separate instances are independent.
class Detector {
 public:
  virtual ~Detector() = default;

  /// Consumes one observation. Throws InputError on a non-finite value and
  /// leaves the state unchanged.
  virtual DetectorDecision observe(double y) = 0;

  virtual std::string_view name() const = 0;

  /// Orientation of DetectorDecision::score for ranking metrics.
  virtual bool higher_score_is_attack() const = 0;
};

}  // namespace bsmguard::detectors
