#include "bsmguard/ml/knn.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "bsmguard/error.hpp"

namespace bsmguard::ml {

void Knn::fit(Dataset train) {
  if (train.empty()) throw InputError("KNN: empty training set");
  train.validate();
  if (params_.k == 0 || params_.k > train.size()) {
    throw ParameterError("KNN: k=" + std::to_string(params_.k) + " must lie in [1, " +
                         std::to_string(train.size()) + "]");
  }
  train_ = std::move(train);
}

Prediction Knn::predict(std::span<const double> x) const {
  if (train_.empty()) throw InputError("KNN: model is not fitted");
  if (x.size() != train_.n_features) throw InputError("KNN: query has the wrong number of features");

  std::vector<std::pair<double, std::size_t>> dist(train_.size());
  for (std::size_t i = 0; i < train_.size(); ++i) {
    const auto r = train_.row(i);
    double d = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = r[j] - x[j];
      d += diff * diff;
    }
    dist[i] = {d, i};
  }
  const auto k = static_cast<std::ptrdiff_t>(params_.k);
  std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());

  std::size_t attacks = 0;
  for (std::ptrdiff_t i = 0; i < k; ++i) attacks += is_attack(train_.labels[dist[static_cast<std::size_t>(i)].second]);
  Prediction p;
  p.score = static_cast<double>(attacks) / static_cast<double>(params_.k);
  p.label = 2 * attacks > params_.k ? Label::attack : Label::no_attack;
  return p;
}

}  // namespace bsmguard::ml
