#pragma once

#include <cstddef>
#include <span>

#include "bsmguard/ml/dataset.hpp"

namespace bsmguard::ml {

struct KnnParams {
  std::size_t k = 19;
};

/// k-nearest-neighbour vote with Euclidean distance. Equal distances are
/// ordered by training row index. The score is the attack fraction among the k
/// neighbours; the label is attack only on a strict majority.
class Knn {
 public:
  Knn() = default;
  explicit Knn(KnnParams params) : params_(params) {}

  /// Stores the training set. Throws InputError when it is empty and
  /// ParameterError when k is 0 or exceeds its size.
  void fit(Dataset train);

  Prediction predict(std::span<const double> x) const;

  const KnnParams& params() const { return params_; }
  const Dataset& train() const { return train_; }

 private:
  KnnParams params_;
  Dataset train_;
};

}  // namespace bsmguard::ml
