#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bsmguard/bsm.hpp"
#include "bsmguard/config.hpp"
#include "bsmguard/detectors/bocpd.hpp"
#include "bsmguard/detectors/cusum.hpp"
#include "bsmguard/detectors/detector.hpp"
#include "bsmguard/detectors/em.hpp"
#include "bsmguard/rolling_transform.hpp"

namespace bsmguard::detectors {

/// Which scalar of an aggregated sample a detector consumes.
enum class InputChannel {
  speed,      // avg_speed as received
  transform,  // rolling control-variate variance of speed/accel
};

std::string_view to_string(InputChannel channel);
InputChannel parse_input_channel(std::string_view text);

inline const std::vector<std::string>& detector_names() {
  static const std::vector<std::string> names{"bocpd", "em", "cusum"};
  return names;
}

/// Reads the `bocpd.*` keys; unspecified keys keep their defaults.
BocpdConfig bocpd_config_from(const Config& config);
/// Reads the `em.*` keys. `em.seed` falls back to `fallback_seed`.
EmConfig em_config_from(const Config& config, std::uint64_t fallback_seed);
/// Reads the `cusum.*` keys.
CusumConfig cusum_config_from(const Config& config);

/// Builds a detector by name ("bocpd", "em", "cusum"); throws ConfigError otherwise.
std::unique_ptr<Detector> make_detector(std::string_view name, const Config& config,
                                        std::uint64_t fallback_seed = 0);

/// Input channel for a detector: `<name>.input`, default speed.
InputChannel input_channel_from(std::string_view name, const Config& config);

/// A detector bound to its input channel; one per vehicle stream.
class DetectorPipeline {
 public:
  DetectorPipeline(std::unique_ptr<Detector> detector, InputChannel channel);

  /// Decision for one aggregated sample. While the transform window is filling
  /// the detector is not called and a warm-up decision is returned.
  DetectorDecision step(const AggregatedSample& sample);

  Detector& detector() { return *detector_; }
  const Detector& detector() const { return *detector_; }
  InputChannel channel() const { return channel_; }

 private:
  std::unique_ptr<Detector> detector_;
  InputChannel channel_;
  std::optional<RollingTransform> transform_;
};

}  // namespace bsmguard::detectors
