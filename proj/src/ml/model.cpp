#include "bsmguard/ml/model.hpp"

#include "bsmguard/csv.hpp"
#include "bsmguard/error.hpp"
#include "bsmguard/ml/smote.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::ml {

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::knn: return "knn";
    case ModelFamily::cart: return "cart";
    case ModelFamily::forest: return "forest";
    case ModelFamily::nn: return "nn";
  }
  return "?";
}

ModelFamily parse_model_family(std::string_view text) {
  if (text == "knn") return ModelFamily::knn;
  if (text == "cart" || text == "dt") return ModelFamily::cart;
  if (text == "forest" || text == "rf") return ModelFamily::forest;
  if (text == "nn") return ModelFamily::nn;
  throw ConfigError("unknown model family '" + std::string(text) + "' (expected knn, cart, forest or nn)");
}

std::string describe(const ModelSpec& spec) {
  auto tree = [](const CartParams& p) {
    return std::string("criterion=") + to_string(p.criterion) + " max_depth=" + std::to_string(p.max_depth) +
           " min_split=" + std::to_string(p.min_split) + " min_leaf=" + std::to_string(p.min_leaf);
  };
  switch (spec.family) {
    case ModelFamily::knn: return "k=" + std::to_string(spec.knn.k);
    case ModelFamily::cart: return tree(spec.cart);
    case ModelFamily::forest: return "n_trees=" + std::to_string(spec.forest.n_trees) + " " + tree(spec.forest.tree);
    case ModelFamily::nn:
      return "hidden=" + std::to_string(spec.nn.hidden) + " epochs=" + std::to_string(spec.nn.epochs) +
             " batch=" + std::to_string(spec.nn.batch) + " learning_rate=" + format_double(spec.nn.learning_rate);
  }
  return {};
}

Prediction predict(const Classifier& model, std::span<const double> x) {
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

Classifier fit_classifier(const ModelSpec& spec, const Dataset& train, std::uint64_t seed) {
  switch (spec.family) {
    case ModelFamily::knn: {
      Knn m(spec.knn);
      m.fit(train);
      return m;
    }
    case ModelFamily::cart: {
      Cart m(spec.cart);
      m.fit(train);
      return m;
    }
    case ModelFamily::forest: {
      ForestParams p = spec.forest;
      p.seed = derive_seed(seed, "forest");
      RandomForest m(p);
      m.fit(train);
      return m;
    }
    case ModelFamily::nn: {
      NnParams p = spec.nn;
      p.seed = derive_seed(seed, "nn");
      return train_neural_net(train, p);
    }
  }
  throw ParameterError("unknown model family");
}

Prediction TrainedModel::predict(std::span<const double> raw) const {
  const auto x = apply_standardizer(standardizer, raw);
  return ml::predict(classifier, x);
}

TrainedModel train_model(const ModelSpec& spec, const Dataset& train, const BalanceOptions& balance,
                         std::uint64_t seed) {
  train.validate();
  TrainedModel out;
  out.spec = spec;
  out.standardizer = fit_standardizer(train.values, train.n_features);
  Dataset data = train;
  standardize_rows(out.standardizer, data.values);
  if (balance.enabled && uses_smote(spec.family)) data = smote_balance(data, balance.smote_k, derive_seed(seed, "smote"));
  out.classifier = fit_classifier(spec, data, derive_seed(seed, "fit"));
  return out;
}

}  // namespace bsmguard::ml
