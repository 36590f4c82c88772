#include "bsmguard/detectors/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bsmguard/error.hpp"

namespace bsmguard::detectors {

namespace {

double normal_logpdf(double y, double mu, double sigma) {
  const double z = (y - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

// log(w * N(y; mu, sigma)) with log(0) = -inf for an empty component.
double weighted_logpdf(double y, double weight, double mu, double sigma) {
  if (weight <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(weight) + normal_logpdf(y, mu, sigma);
}

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

double max_change(const MixtureParams& a, const MixtureParams& b) {
  return std::max({std::abs(a.mu_normal - b.mu_normal), std::abs(a.mu_attack - b.mu_attack),
                   std::abs(a.sigma_normal - b.sigma_normal), std::abs(a.sigma_attack - b.sigma_attack),
                   std::abs(a.attack_weight - b.attack_weight)});
}

}  // namespace

double attack_responsibility(double y, const MixtureParams& params) {
  const double la = weighted_logpdf(y, params.attack_weight, params.mu_attack, params.sigma_attack);
  const double ln = weighted_logpdf(y, 1.0 - params.attack_weight, params.mu_normal, params.sigma_normal);
  const double total = log_sum_exp(la, ln);
  if (total == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::exp(la - total);
}

std::vector<double> attack_responsibilities(std::span<const double> data, const MixtureParams& params) {
  std::vector<double> resp(data.size());
  std::transform(data.begin(), data.end(), resp.begin(),
                 [&](double y) { return attack_responsibility(y, params); });
  return resp;
}

MixtureParams em_m_step(std::span<const double> data, std::span<const double> attack_resp,
                        const MixtureParams& previous, double sigma_floor) {
  if (data.size() != attack_resp.size() || data.empty()) {
    throw ParameterError("em_m_step: data and responsibilities must be non-empty and aligned");
  }
  double w_attack = 0.0;
  double w_normal = 0.0;
  double s_attack = 0.0;
  double s_normal = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double g = attack_resp[i];
    w_attack += g;
    w_normal += 1.0 - g;
    s_attack += g * data[i];
    s_normal += (1.0 - g) * data[i];
  }

  MixtureParams next = previous;
  next.attack_weight = w_attack / static_cast<double>(data.size());
  if (w_normal > 0.0) next.mu_normal = s_normal / w_normal;
  if (w_attack > 0.0) next.mu_attack = s_attack / w_attack;

  double v_attack = 0.0;
  double v_normal = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double g = attack_resp[i];
    const double da = data[i] - next.mu_attack;
    const double dn = data[i] - next.mu_normal;
    v_attack += g * da * da;
    v_normal += (1.0 - g) * dn * dn;
  }
  if (w_normal > 0.0) next.sigma_normal = std::max(std::sqrt(v_normal / w_normal), sigma_floor);
  if (w_attack > 0.0) next.sigma_attack = std::max(std::sqrt(v_attack / w_attack), sigma_floor);
  return next;
}

double mixture_log_likelihood(std::span<const double> data, const MixtureParams& params) {
  double total = 0.0;
  for (const double y : data) {
    total += log_sum_exp(weighted_logpdf(y, params.attack_weight, params.mu_attack, params.sigma_attack),
                         weighted_logpdf(y, 1.0 - params.attack_weight, params.mu_normal,
                                         params.sigma_normal));
  }
  return total;
}

EmFit fit_mixture(std::span<const double> data, const MixtureParams& initial, const EmOptions& options) {
  if (data.empty()) throw ParameterError("fit_mixture: empty data");
  EmFit fit;
  fit.params = initial;
  fit.params.sigma_normal = std::max(fit.params.sigma_normal, options.sigma_floor);
  fit.params.sigma_attack = std::max(fit.params.sigma_attack, options.sigma_floor);
  fit.log_likelihood.reserve(options.max_iterations + 1);

  while (fit.iterations < options.max_iterations) {
    fit.log_likelihood.push_back(mixture_log_likelihood(data, fit.params));
    const auto resp = attack_responsibilities(data, fit.params);
    const MixtureParams next = em_m_step(data, resp, fit.params, options.sigma_floor);
    const double change = max_change(next, fit.params);
    fit.params = next;
    ++fit.iterations;
    if (change < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.log_likelihood.push_back(mixture_log_likelihood(data, fit.params));
  return fit;
}

EmDetector::EmDetector(const EmConfig& config) : config_(config), rng_(config.seed) {
  if (config.seed_size < 2) throw ParameterError("em: seed buffer needs at least 2 observations");
  if (!(config.attack_sigma > 0.0)) throw ParameterError("em: attack sigma must be positive");
  if (!(config.initial_attack_weight >= 0.0 && config.initial_attack_weight <= 1.0)) {
    throw ParameterError("em: initial attack weight must lie in [0, 1]");
  }
  state_.seed_buffer.reserve(config.seed_size);
}

void EmDetector::build_synthetic_sample() {
  const auto& buf = state_.seed_buffer;
  const auto n = static_cast<double>(buf.size());
  double mean = 0.0;
  for (const double v : buf) mean += v;
  mean /= n;
  double ss = 0.0;
  for (const double v : buf) ss += (v - mean) * (v - mean);
  state_.seed_mean = mean;
  state_.seed_sigma = std::max(std::sqrt(ss / (n - 1.0)), config_.em.sigma_floor);

  state_.synthetic.clear();
  for (std::size_t i = 0; i < config_.normal_draws; ++i) {
    state_.synthetic.push_back(rng_.normal(state_.seed_mean, state_.seed_sigma));
  }
  for (std::size_t i = 0; i < config_.attack_draws; ++i) {
    state_.synthetic.push_back(rng_.normal(config_.attack_mean, config_.attack_sigma));
  }
}

MixtureParams EmDetector::initial_params() const {
  return MixtureParams{state_.seed_mean, config_.attack_mean, state_.seed_sigma, config_.attack_sigma,
                       config_.initial_attack_weight};
}

EmFit EmDetector::fit_observation(double y) const {
  if (state_.synthetic.empty()) throw ParameterError("em: synthetic sample not built yet");
  std::vector<double> data = state_.synthetic;
  data.push_back(y);
  return fit_mixture(data, initial_params(), config_.em);
}

DetectorDecision EmDetector::observe(double y) {
  if (!std::isfinite(y)) throw InputError("em: non-finite observation");
  ++state_.observations;
  if (state_.seed_buffer.size() < config_.seed_size) {
    state_.seed_buffer.push_back(y);
    if (state_.seed_buffer.size() == config_.seed_size) build_synthetic_sample();
    return DetectorDecision{false, 0.0, false};
  }

  const EmFit fit = fit_observation(y);
  for (std::size_t i = 1; i < fit.log_likelihood.size(); ++i) {
    state_.max_log_likelihood_drop =
        std::max(state_.max_log_likelihood_drop, fit.log_likelihood[i - 1] - fit.log_likelihood[i]);
  }
  state_.last_fit = fit.params;
  state_.last_iterations = fit.iterations;
  ++state_.fits;

  DetectorDecision decision;
  decision.warmed_up = true;
  decision.score = attack_responsibility(y, fit.params);
  decision.attack = decision.score > config_.threshold;
  return decision;
}

}  // namespace bsmguard::detectors
