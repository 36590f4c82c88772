#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "bsmguard/config.hpp"
#include "bsmguard/ml/cart.hpp"
#include "bsmguard/ml/dataset.hpp"
#include "bsmguard/ml/forest.hpp"
#include "bsmguard/ml/knn.hpp"
#include "bsmguard/ml/nn.hpp"
#include "bsmguard/standardize.hpp"

namespace bsmguard::ml {

enum class ModelFamily { knn, cart, forest, nn };

std::string_view to_string(ModelFamily family);
ModelFamily parse_model_family(std::string_view text);

/// One point of a hyperparameter grid. Only the member matching `family` is used.
struct ModelSpec {
  ModelFamily family = ModelFamily::cart;
  KnnParams knn;
  CartParams cart;
  ForestParams forest;
  NnParams nn;
};

/// Defaults for a family (the tuned values used when no grid is given).
inline ModelSpec default_spec(ModelFamily family) {
  ModelSpec s;
  s.family = family;
  return s;
}

/// Short "name=value" summary of the hyperparameters that matter for the family.
std::string describe(const ModelSpec& spec);

using Classifier = std::variant<Knn, Cart, RandomForest, NeuralNet>;

Prediction predict(const Classifier& model, std::span<const double> x);

/// Fits the family's classifier on already preprocessed data.
Classifier fit_classifier(const ModelSpec& spec, const Dataset& train, std::uint64_t seed);

/// SMOTE applies to KNN and NN only; CART and the forest balance through
/// class weights (CartParams::weighting) instead.
struct BalanceOptions {
  bool enabled = true;
  std::size_t smote_k = 5;
};

inline bool uses_smote(ModelFamily family) { return family == ModelFamily::knn || family == ModelFamily::nn; }

/// A classifier together with the preprocessing it was trained behind.
struct TrainedModel {
  ModelSpec spec;
  StandardizationParams standardizer;
  Classifier classifier;

  /// Standardizes raw features, then classifies.
  Prediction predict(std::span<const double> raw) const;
};

/// Standardize on `train`, balance (SMOTE for KNN/NN), fit.
TrainedModel train_model(const ModelSpec& spec, const Dataset& train, const BalanceOptions& balance,
                         std::uint64_t seed);

}  // namespace bsmguard::ml
