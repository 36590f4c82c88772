#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bsmguard/detectors/detector.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::detectors {

/// Two-component univariate Gaussian mixture. Component 1 is "no attack",
/// component 2 is "attack"; attack_weight is the mixing proportion of component 2.
struct MixtureParams {
  double mu_normal = 0.0;
  double mu_attack = 0.0;
  double sigma_normal = 1.0;
  double sigma_attack = 1.0;
  double attack_weight = 0.5;
};

struct EmOptions {
  std::size_t max_iterations = 200;
  double tolerance = 1e-8;  // stop when the largest parameter change is below this
  double sigma_floor = 1e-8;
};

struct EmFit {
  MixtureParams params;
  std::size_t iterations = 0;
  bool converged = false;
  /// Log-likelihood of the data under the parameters entering each iteration,
  /// followed by the value at the final parameters.
  std::vector<double> log_likelihood;
};

/// Posterior probability of the attack component for each point.
std::vector<double> attack_responsibilities(std::span<const double> data, const MixtureParams& params);
double attack_responsibility(double y, const MixtureParams& params);

/// Maximum-likelihood update given attack-component responsibilities. A
/// component with no responsibility mass keeps its previous location and scale.
MixtureParams em_m_step(std::span<const double> data, std::span<const double> attack_resp,
                        const MixtureParams& previous, double sigma_floor);

double mixture_log_likelihood(std::span<const double> data, const MixtureParams& params);

EmFit fit_mixture(std::span<const double> data, const MixtureParams& initial, const EmOptions& options = {});

struct EmConfig {
  double threshold = 0.01;  // attack when the attack responsibility exceeds this
  std::uint64_t seed = 0;   // drives the synthetic seed sample
  std::size_t seed_size = 10;     // first observations used to build the synthetic sample
  std::size_t normal_draws = 7;   // synthetic no-attack points ~ N(mean, var) of the seed buffer
  std::size_t attack_draws = 3;   // synthetic attack points ~ N(attack_mean, attack_sigma^2)
  double attack_mean = 0.5;
  double attack_sigma = 1.0;
  double initial_attack_weight = 0.8;
  EmOptions em;
};

struct EmState {
  std::vector<double> seed_buffer;
  std::vector<double> synthetic;  // normal draws followed by attack draws
  double seed_mean = 0.0;
  double seed_sigma = 0.0;
  MixtureParams last_fit;
  std::size_t last_iterations = 0;
  double max_log_likelihood_drop = 0.0;  // worst decrease seen in any fit so far
  std::size_t fits = 0;
  std::size_t observations = 0;
};

/// Mixture-responsibility detector.
///
/// The first seed_size observations are buffered (warm-up). From them a
/// synthetic sample is drawn once: normal_draws points from N(mean, var) of the
/// buffer and attack_draws points from N(attack_mean, attack_sigma^2). Every
/// later observation y is appended to that sample, a two-component mixture is
/// fitted by EM, and y is an attack when its attack responsibility exceeds the
/// threshold.
class EmDetector final : public Detector {
 public:
  explicit EmDetector(const EmConfig& config = {});

  DetectorDecision observe(double y) override;
  std::string_view name() const override { return "em"; }
  bool higher_score_is_attack() const override { return true; }

  /// EM fit for y against the current synthetic sample (requires warm-up done).
  EmFit fit_observation(double y) const;

  const EmState& state() const { return state_; }
  const EmConfig& config() const { return config_; }

 private:
  void build_synthetic_sample();
  MixtureParams initial_params() const;

  EmConfig config_;
  EmState state_;
  Rng rng_;
};

}  // namespace bsmguard::detectors
