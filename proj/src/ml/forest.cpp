#include "bsmguard/ml/forest.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "bsmguard/error.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::ml {

std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed, std::size_t index) {
  Rng rng(derive_seed(seed, "rf.tree", index));
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = rng.index(n);
  return rows;
}

void RandomForest::fit(const Dataset& data) {
  if (params_.n_trees == 0) throw ParameterError("random forest needs at least one tree");
  if (data.empty()) throw InputError("random forest: empty training set");
  std::vector<std::vector<std::size_t>> bootstraps;
  bootstraps.reserve(params_.n_trees);
  for (std::size_t i = 0; i < params_.n_trees; ++i) bootstraps.push_back(bootstrap_rows(data.size(), params_.seed, i));
  fit_on(data, bootstraps);
}

void RandomForest::fit_on(const Dataset& data, std::span<const std::vector<std::size_t>> bootstraps) {
  if (bootstraps.empty()) throw ParameterError("random forest needs at least one tree");
  data.validate();
  const auto weights = class_weights(data.labels, params_.tree.weighting);
  std::vector<Cart> trees(bootstraps.size(), Cart(params_.tree));

  std::size_t workers = params_.threads == 0 ? std::thread::hardware_concurrency() : params_.threads;
  workers = std::clamp<std::size_t>(workers, 1, bootstraps.size());

  if (workers == 1) {
    for (std::size_t i = 0; i < trees.size(); ++i) trees[i].fit(data, bootstraps[i], weights);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < trees.size(); i = next++) {
          try {
            trees[i].fit(data, bootstraps[i], weights);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }
  trees_ = std::move(trees);
}

Prediction RandomForest::predict(std::span<const double> x) const {
  if (trees_.empty()) throw InputError("random forest: model is not fitted");
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.predict(x).score;
  const double p = sum / static_cast<double>(trees_.size());
  return Prediction{p > 0.5 ? Label::attack : Label::no_attack, p};
}

RandomForest RandomForest::from_trees(ForestParams params, std::vector<Cart> trees) {
  if (trees.empty()) throw InputError("forest has no trees");
  params.n_trees = trees.size();
  RandomForest f(params);
  f.trees_ = std::move(trees);
  return f;
}

}  // namespace bsmguard::ml
