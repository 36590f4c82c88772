#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bsmguard/ml/cart.hpp"
#include "bsmguard/ml/dataset.hpp"

namespace bsmguard::ml {

struct ForestParams {
  std::size_t n_trees = 400;
  CartParams tree{Criterion::entropy, 90, 12, 5, ClassWeighting::balanced, {}};
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // 0 picks the hardware concurrency
};

/// Bagged CART ensemble. Tree i trains on a bootstrap drawn from its own seed,
/// derive_seed(seed, "rf.tree", i), so results do not depend on thread count.
class RandomForest {
 public:
  RandomForest() = default;
  explicit RandomForest(ForestParams params) : params_(params) {}

  void fit(const Dataset& data);

  /// Fits one tree per row-index list. Class weights come from the full data.
  void fit_on(const Dataset& data, std::span<const std::vector<std::size_t>> bootstraps);

  /// Mean attack probability over the trees, attack when above 0.5.
  Prediction predict(std::span<const double> x) const;

  const ForestParams& params() const { return params_; }
  const std::vector<Cart>& trees() const { return trees_; }

  static RandomForest from_trees(ForestParams params, std::vector<Cart> trees);

 private:
  ForestParams params_;
  std::vector<Cart> trees_;
};

/// The bootstrap (n draws with replacement) used for tree `index`.
std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed, std::size_t index);

}  // namespace bsmguard::ml
