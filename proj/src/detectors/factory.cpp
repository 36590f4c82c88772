#include "bsmguard/detectors/factory.hpp"

#include "bsmguard/error.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::detectors {

std::string_view to_string(InputChannel channel) {
  return channel == InputChannel::speed ? "speed" : "transform";
}

InputChannel parse_input_channel(std::string_view text) {
  if (text == "speed") return InputChannel::speed;
  if (text == "transform") return InputChannel::transform;
  throw ConfigError("unknown input channel '" + std::string(text) + "' (expected speed or transform)");
}

BocpdConfig bocpd_config_from(const Config& config) {
  BocpdConfig c;
  c.lambda = config.get_double("bocpd.lambda", c.lambda);
  c.mu0 = config.get_double("bocpd.mu0", c.mu0);
  c.kappa = config.get_double("bocpd.kappa", c.kappa);
  c.alpha = config.get_double("bocpd.alpha", c.alpha);
  c.beta = config.get_double("bocpd.beta", c.beta);
  c.threshold = config.get_double("bocpd.threshold", c.threshold);
  c.warmup = config.get_size("bocpd.warmup", c.warmup);
  if (!(c.lambda > 0.0 && c.lambda < 1.0)) config.fail("bocpd.lambda", "must lie in (0, 1)");
  if (!(c.kappa > 0.0)) config.fail("bocpd.kappa", "must be positive");
  if (!(c.alpha > 0.0)) config.fail("bocpd.alpha", "must be positive");
  if (!(c.beta > 0.0)) config.fail("bocpd.beta", "must be positive");
  if (!(c.threshold >= 0.0)) config.fail("bocpd.threshold", "must be non-negative");
  return c;
}

EmConfig em_config_from(const Config& config, std::uint64_t fallback_seed) {
  EmConfig c;
  c.threshold = config.get_double("em.threshold", c.threshold);
  c.seed = config.get_u64("em.seed", derive_seed(fallback_seed, "em"));
  c.seed_size = config.get_size("em.seed_size", c.seed_size);
  c.attack_mean = config.get_double("em.attack_mean", c.attack_mean);
  c.attack_sigma = config.get_double("em.attack_sigma", c.attack_sigma);
  c.initial_attack_weight = config.get_double("em.pi", c.initial_attack_weight);
  c.em.max_iterations = config.get_size("em.max_iterations", c.em.max_iterations);
  c.em.tolerance = config.get_double("em.tolerance", c.em.tolerance);
  if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) config.fail("em.threshold", "must lie in [0, 1]");
  if (c.seed_size < 2) config.fail("em.seed_size", "must be at least 2");
  if (!(c.attack_sigma > 0.0)) config.fail("em.attack_sigma", "must be positive");
  if (!(c.initial_attack_weight >= 0.0 && c.initial_attack_weight <= 1.0)) {
    config.fail("em.pi", "must lie in [0, 1]");
  }
  return c;
}

CusumConfig cusum_config_from(const Config& config) {
  CusumConfig c;
  c.delta = config.get_double("cusum.delta", c.delta);
  c.alpha = config.get_double("cusum.alpha", c.alpha);
  c.h_sigma = config.get_double("cusum.h_sigma", c.h_sigma);
  c.warmup = config.get_size("cusum.warmup", c.warmup);
  if (auto rule = config.get_string("cusum.rule")) {
    if (*rule == "adaptive") {
      c.rule = CusumRule::adaptive;
    } else if (*rule == "tabular") {
      c.rule = CusumRule::tabular;
    } else {
      config.fail("cusum.rule", "expected adaptive or tabular");
    }
  }
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) config.fail("cusum.alpha", "must lie in [0, 1]");
  if (!(c.h_sigma > 0.0)) config.fail("cusum.h_sigma", "must be positive");
  if (!(c.delta >= 0.0)) config.fail("cusum.delta", "must be non-negative");
  if (c.warmup < 2) config.fail("cusum.warmup", "must be at least 2");
  return c;
}

std::unique_ptr<Detector> make_detector(std::string_view name, const Config& config,
                                        std::uint64_t fallback_seed) {
  if (name == "bocpd") return std::make_unique<Bocpd>(bocpd_config_from(config));
  if (name == "em") return std::make_unique<EmDetector>(em_config_from(config, fallback_seed));
  if (name == "cusum") return std::make_unique<CusumDetector>(cusum_config_from(config));
  throw ConfigError("unknown detector '" + std::string(name) + "' (expected bocpd, em or cusum)");
}

InputChannel input_channel_from(std::string_view name, const Config& config) {
  const std::string key = std::string(name) + ".input";
  const auto text = config.get_string(key);
  if (!text) return InputChannel::speed;
  try {
    return parse_input_channel(*text);
  } catch (const ConfigError& e) {
    config.fail(key, e.what());
  }
}

DetectorPipeline::DetectorPipeline(std::unique_ptr<Detector> detector, InputChannel channel)
    : detector_(std::move(detector)), channel_(channel) {
  if (!detector_) throw ParameterError("DetectorPipeline: null detector");
  if (channel_ == InputChannel::transform) transform_.emplace();
}

DetectorDecision DetectorPipeline::step(const AggregatedSample& sample) {
  if (channel_ == InputChannel::speed) return detector_->observe(sample.avg_speed);
  const auto y = transform_->push(sample);
  if (!y) return DetectorDecision{false, 0.0, false};
  return detector_->observe(*y);
}

}  // namespace bsmguard::detectors
