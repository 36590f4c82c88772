#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bsmguard/bsm.hpp"

namespace bsmguard::ml {

/// Classifier output: predicted label and the attack score behind it.
struct Prediction {
  Label label = Label::no_attack;
  double score = 0.0;  // attack probability or attack-neighbour fraction
};

/// Row-major feature matrix with binary labels.
struct Dataset {
  std::size_t n_features = 0;
  std::vector<double> values;
  std::vector<Label> labels;

  Dataset() = default;
  explicit Dataset(std::size_t features) : n_features(features) {}

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_features, n_features};
  }
  std::span<double> row(std::size_t i) { return {values.data() + i * n_features, n_features}; }

  void add(std::span<const double> x, Label label);

  /// Rows in the given order (indices may repeat).
  Dataset subset(std::span<const std::size_t> indices) const;

  /// {no_attack count, attack count}
  std::array<std::size_t, 2> class_counts() const;

  /// Throws InputError on a shape mismatch or a non-finite feature.
  void validate() const;
};

/// Two-feature (avg_speed, avg_accel) dataset from aggregated samples.
Dataset dataset_from_samples(std::span<const AggregatedSample> samples);

struct TrainTestSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified shuffle split: each class contributes round(train_fraction * n_c)
/// rows to train. Index lists are sorted ascending.
TrainTestSplit stratified_split(std::span<const Label> labels, double train_fraction, std::uint64_t seed);

/// Stratified k-fold assignment: returns, for each fold, the validation indices
/// (sorted). Each class is shuffled and dealt round-robin, so fold sizes per class
/// differ by at most one. Throws InputError when a class has fewer than k rows.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> labels, std::size_t k,
                                                       std::uint64_t seed);

/// Complement of `held_out` within [0, n), sorted.
std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> held_out);

}  // namespace bsmguard::ml
