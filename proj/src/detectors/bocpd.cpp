#include "bsmguard/detectors/bocpd.hpp"

#include <algorithm>
#include <cmath>

#include "bsmguard/detectors/student_t.hpp"
#include "bsmguard/error.hpp"

namespace bsmguard::detectors {

namespace {

double predictive(double y, double mu, double kappa, double alpha, double beta) {
  const double scale = std::sqrt(beta * (kappa + 1.0) / (alpha * kappa));
  return student_t_logpdf(y, 2.0 * alpha, mu, scale);
}

}  // namespace

Bocpd::Bocpd(const BocpdConfig& config) : config_(config) {
  if (!(config.kappa > 0.0) || !(config.alpha > 0.0) || !(config.beta > 0.0)) {
    throw ParameterError("bocpd: kappa, alpha and beta must be positive");
  }
  if (!(config.lambda > 0.0 && config.lambda < 1.0)) {
    throw ParameterError("bocpd: hazard lambda must lie in (0, 1)");
  }
  if (!std::isfinite(config.mu0) || !(config.threshold >= 0.0)) {
    throw ParameterError("bocpd: mu0 must be finite and threshold non-negative");
  }
  state_.mu = config.mu0;
  state_.kappa = config.kappa;
  state_.alpha = config.alpha;
  state_.beta = config.beta;
}

double Bocpd::predictive_logpdf(double y) const {
  return predictive(y, state_.mu, state_.kappa, state_.alpha, state_.beta);
}

DetectorDecision Bocpd::observe(double y) {
  if (!std::isfinite(y)) throw InputError("bocpd: non-finite observation");

  const double log_run = predictive_logpdf(y);
  const double log_fresh = predictive(y, config_.mu0, config_.kappa, config_.alpha, config_.beta);
  const double p = std::exp(log_run);

  // Two-hypothesis run-length update: continue (1 - h) versus restart (h).
  const double log_growth = std::log1p(-config_.lambda) + log_run;
  const double log_cp = std::log(config_.lambda) + log_fresh;
  const double hi = std::max(log_growth, log_cp);
  state_.changepoint_probability =
      std::exp(log_cp - hi) / (std::exp(log_cp - hi) + std::exp(log_growth - hi));

  DetectorDecision decision;
  decision.score = p;
  decision.warmed_up = state_.observations >= config_.warmup;
  ++state_.observations;

  if (decision.warmed_up && p < config_.threshold) {
    decision.attack = true;
    state_.run_length = 1;
    state_.run_mean = y;
    return decision;
  }

  state_.run_length += 1;
  state_.run_mean += (y - state_.run_mean) / static_cast<double>(state_.run_length);

  const double k = state_.kappa;
  const double delta = y - state_.mu;
  state_.beta += k * delta * delta / (2.0 * (k + 1.0));
  state_.mu = (k * state_.mu + y) / (k + 1.0);
  state_.kappa = k + 1.0;
  state_.alpha += 0.5;
  return decision;
}

}  // namespace bsmguard::detectors
