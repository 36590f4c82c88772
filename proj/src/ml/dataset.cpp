#include "bsmguard/ml/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsmguard/error.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::ml {

void Dataset::add(std::span<const double> x, Label label) {
  if (x.size() != n_features) {
    throw InputError("row has " + std::to_string(x.size()) + " features, expected " +
                     std::to_string(n_features));
  }
  values.insert(values.end(), x.begin(), x.end());
  labels.push_back(label);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out(n_features);
  out.values.reserve(indices.size() * n_features);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.add(row(i), labels[i]);
  return out;
}

std::array<std::size_t, 2> Dataset::class_counts() const {
  std::array<std::size_t, 2> counts{0, 0};
  for (Label l : labels) ++counts[to_int(l)];
  return counts;
}

void Dataset::validate() const {
  if (n_features == 0) throw InputError("dataset has no features");
  if (values.size() != labels.size() * n_features) throw InputError("dataset shape mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InputError("row " + std::to_string(i / n_features) + " has a non-finite feature");
    }
  }
}

Dataset dataset_from_samples(std::span<const AggregatedSample> samples) {
  Dataset out(2);
  out.values.reserve(samples.size() * 2);
  for (const auto& s : samples) {
    const double x[2] = {s.avg_speed, s.avg_accel};
    out.add(x, s.label);
  }
  return out;
}

namespace {

std::array<std::vector<std::size_t>, 2> by_class(std::span<const Label> labels) {
  std::array<std::vector<std::size_t>, 2> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[to_int(labels[i])].push_back(i);
  return groups;
}

// Fisher-Yates with the project Rng, so orderings do not depend on the standard library.
void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

}  // namespace

TrainTestSplit stratified_split(std::span<const Label> labels, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ParameterError("train fraction must lie in (0, 1)");
  }
  Rng rng(seed);
  TrainTestSplit split;
  for (auto& group : by_class(labels)) {
    shuffle(group, rng);
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(group.size())));
    split.train.insert(split.train.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), group.begin() + static_cast<std::ptrdiff_t>(n_train), group.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> labels, std::size_t k,
                                                       std::uint64_t seed) {
  if (k < 2) throw ParameterError("need at least 2 folds");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  for (auto& group : by_class(labels)) {
    if (group.empty()) continue;
    if (group.size() < k) {
      throw InputError("cannot stratify " + std::to_string(group.size()) + " rows of a class into " +
                       std::to_string(k) + " folds");
    }
    shuffle(group, rng);
    for (std::size_t i = 0; i < group.size(); ++i) folds[i % k].push_back(group[i]);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> held_out) {
  std::vector<bool> skip(n, false);
  for (std::size_t i : held_out) skip.at(i) = true;
  std::vector<std::size_t> out;
  out.reserve(n - std::min(n, held_out.size()));
  for (std::size_t i = 0; i < n; ++i) {
    if (!skip[i]) out.push_back(i);
  }
  return out;
}

}  // namespace bsmguard::ml
