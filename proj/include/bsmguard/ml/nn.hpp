#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bsmguard/ml/dataset.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::ml {

struct NnParams {
  std::size_t hidden = 10;
  std::size_t epochs = 100;
  std::size_t batch = 50;
  double learning_rate = 0.2;
  double init_range = 0.5;  // weights ~ U(-init_range, init_range), biases 0
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
};

/// One hidden ReLU layer feeding a sigmoid output unit, trained on binary
/// cross-entropy with Adam.
///
/// Parameters live in one flat vector:
///   [ W_h (hidden x features, row-major) | b_h (hidden) | w_o (hidden) | b_o ]
class NeuralNet {
 public:
  NeuralNet() = default;
  /// All-zero parameters.
  NeuralNet(std::size_t n_features, std::size_t hidden);

  static std::size_t parameter_count(std::size_t n_features, std::size_t hidden) {
    return hidden * n_features + 2 * hidden + 1;
  }

  /// Uniform weights in (-range, range), zero biases.
  void initialize(Rng& rng, double range);

  /// Output-unit pre-activation.
  double logit(std::span<const double> x) const;
  /// Attack probability.
  double forward(std::span<const double> x) const;
  Prediction predict(std::span<const double> x) const;

  /// Mean binary cross-entropy over the given rows.
  double loss(const Dataset& data, std::span<const std::size_t> rows) const;
  /// Mean loss over the rows; writes d(loss)/d(parameters) into `gradient`.
  double loss_and_gradient(const Dataset& data, std::span<const std::size_t> rows,
                           std::vector<double>& gradient) const;

  /// Mini-batch Adam. Returns the full-set loss after each epoch. Throws
  /// TrainingError when the loss stops being finite.
  std::vector<double> train(const Dataset& data, const NnParams& params);

  std::size_t n_features() const { return n_features_; }
  std::size_t hidden() const { return hidden_; }
  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }

  /// Throws InputError when the vector length does not match the shape.
  static NeuralNet from_parameters(std::size_t n_features, std::size_t hidden, std::vector<double> parameters);

 private:
  std::size_t bias_h() const { return hidden_ * n_features_; }
  std::size_t weight_o() const { return bias_h() + hidden_; }
  std::size_t bias_o() const { return weight_o() + hidden_; }

  std::size_t n_features_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> params_;
};

/// Fits a fresh network with the given hyperparameters.
NeuralNet train_neural_net(const Dataset& data, const NnParams& params);

}  // namespace bsmguard::ml
