#include "bsmguard/ml/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsmguard/error.hpp"

namespace bsmguard::ml {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -[y log s(z) + (1 - y) log(1 - s(z))], evaluated without forming s(z).
double bce_from_logit(double z, double y) {
  return std::max(z, 0.0) - y * z + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

NeuralNet::NeuralNet(std::size_t n_features, std::size_t hidden)
    : n_features_(n_features), hidden_(hidden), params_(parameter_count(n_features, hidden), 0.0) {
  if (n_features == 0 || hidden == 0) throw ParameterError("neural net needs features and hidden units");
}

void NeuralNet::initialize(Rng& rng, double range) {
  std::fill(params_.begin(), params_.end(), 0.0);
  for (std::size_t i = 0; i < bias_h(); ++i) params_[i] = rng.uniform(-range, range);
  for (std::size_t i = weight_o(); i < bias_o(); ++i) params_[i] = rng.uniform(-range, range);
}

double NeuralNet::logit(std::span<const double> x) const {
  if (x.size() != n_features_) throw InputError("neural net: input has the wrong number of features");
  double z = params_[bias_o()];
  for (std::size_t h = 0; h < hidden_; ++h) {
    double a = params_[bias_h() + h];
    const double* w = params_.data() + h * n_features_;
    for (std::size_t j = 0; j < n_features_; ++j) a += w[j] * x[j];
    if (a > 0.0) z += params_[weight_o() + h] * a;
  }
  return z;
}

double NeuralNet::forward(std::span<const double> x) const { return sigmoid(logit(x)); }

Prediction NeuralNet::predict(std::span<const double> x) const {
  const double p = forward(x);
  return Prediction{p > 0.5 ? Label::attack : Label::no_attack, p};
}

double NeuralNet::loss(const Dataset& data, std::span<const std::size_t> rows) const {
  if (rows.empty()) throw InputError("neural net: loss over no rows");
  double sum = 0.0;
  for (std::size_t r : rows) sum += bce_from_logit(logit(data.row(r)), is_attack(data.labels[r]) ? 1.0 : 0.0);
  return sum / static_cast<double>(rows.size());
}

double NeuralNet::loss_and_gradient(const Dataset& data, std::span<const std::size_t> rows,
                                    std::vector<double>& gradient) const {
  if (rows.empty()) throw InputError("neural net: gradient over no rows");
  gradient.assign(params_.size(), 0.0);
  std::vector<double> pre(hidden_);
  double sum = 0.0;
  for (std::size_t r : rows) {
    const auto x = data.row(r);
    const double y = is_attack(data.labels[r]) ? 1.0 : 0.0;
    double z = params_[bias_o()];
    for (std::size_t h = 0; h < hidden_; ++h) {
      double a = params_[bias_h() + h];
      const double* w = params_.data() + h * n_features_;
      for (std::size_t j = 0; j < n_features_; ++j) a += w[j] * x[j];
      pre[h] = a;
      if (a > 0.0) z += params_[weight_o() + h] * a;
    }
    sum += bce_from_logit(z, y);
    const double dz = sigmoid(z) - y;
    gradient[bias_o()] += dz;
    for (std::size_t h = 0; h < hidden_; ++h) {
      if (!(pre[h] > 0.0)) continue;
      gradient[weight_o() + h] += dz * pre[h];
      const double da = dz * params_[weight_o() + h];
      gradient[bias_h() + h] += da;
      double* g = gradient.data() + h * n_features_;
      for (std::size_t j = 0; j < n_features_; ++j) g[j] += da * x[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& g : gradient) g *= inv;
  return sum * inv;
}

std::vector<double> NeuralNet::train(const Dataset& data, const NnParams& params) {
  if (data.empty()) throw InputError("neural net: empty training set");
  if (params.batch == 0) throw ParameterError("neural net: batch size must be positive");
  if (!(params.learning_rate > 0.0)) throw ParameterError("neural net: learning rate must be positive");
  data.validate();
  if (data.n_features != n_features_) throw InputError("neural net: data has the wrong number of features");

  Rng rng(derive_seed(params.seed, "nn.shuffle"));
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double> m(params_.size(), 0.0);
  std::vector<double> v(params_.size(), 0.0);
  std::vector<double> grad;
  double beta1_t = 1.0;
  double beta2_t = 1.0;
  std::vector<double> history;
  history.reserve(params.epochs);

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    for (std::size_t start = 0; start < order.size(); start += params.batch) {
      const std::size_t end = std::min(order.size(), start + params.batch);
      const double batch_loss =
          loss_and_gradient(data, std::span<const std::size_t>(order).subspan(start, end - start), grad);
      if (!std::isfinite(batch_loss)) {
        throw TrainingError("neural net loss became non-finite in epoch " + std::to_string(epoch + 1) +
                            "; the learning rate " + std::to_string(params.learning_rate) +
                            " is probably too high");
      }
      beta1_t *= params.beta1;
      beta2_t *= params.beta2;
      for (std::size_t p = 0; p < params_.size(); ++p) {
        m[p] = params.beta1 * m[p] + (1.0 - params.beta1) * grad[p];
        v[p] = params.beta2 * v[p] + (1.0 - params.beta2) * grad[p] * grad[p];
        const double m_hat = m[p] / (1.0 - beta1_t);
        const double v_hat = v[p] / (1.0 - beta2_t);
        params_[p] -= params.learning_rate * m_hat / (std::sqrt(v_hat) + params.epsilon);
      }
    }
    const double epoch_loss = loss(data, order);
    if (!std::isfinite(epoch_loss)) {
      throw TrainingError("neural net loss became non-finite after epoch " + std::to_string(epoch + 1) +
                          "; the learning rate " + std::to_string(params.learning_rate) +
                          " is probably too high");
    }
    history.push_back(epoch_loss);
  }
  return history;
}

NeuralNet NeuralNet::from_parameters(std::size_t n_features, std::size_t hidden, std::vector<double> parameters) {
  NeuralNet net(n_features, hidden);
  if (parameters.size() != net.params_.size()) throw InputError("neural net: parameter vector has the wrong length");
  for (double p : parameters) {
    if (!std::isfinite(p)) throw InputError("neural net: non-finite parameter");
  }
  net.params_ = std::move(parameters);
  return net;
}

NeuralNet train_neural_net(const Dataset& data, const NnParams& params) {
  NeuralNet net(data.n_features, params.hidden);
  Rng rng(derive_seed(params.seed, "nn.init"));
  net.initialize(rng, params.init_range);
  net.train(data, params);
  return net;
}

}  // namespace bsmguard::ml
