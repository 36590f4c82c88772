#pragma once

#include <cstddef>
#include <cstdint>

#include "bsmguard/ml/dataset.hpp"
#include "bsmguard/rng.hpp"

namespace testdata {

// Two Gaussian blobs in the plane, unit variance, centres (0, 0) and
// (separation, separation). Normal rows first, then attack rows.
inline bsmguard::ml::Dataset blobs(std::size_t n_normal, std::size_t n_attack, double separation,
                                   std::uint64_t seed) {
  bsmguard::Rng rng(seed);
  bsmguard::ml::Dataset d(2);
  for (std::size_t i = 0; i < n_normal; ++i) {
    const double x[2] = {rng.normal(), rng.normal()};
    d.add(x, bsmguard::Label::no_attack);
  }
  for (std::size_t i = 0; i < n_attack; ++i) {
    const double x[2] = {rng.normal(separation, 1.0), rng.normal(separation, 1.0)};
    d.add(x, bsmguard::Label::attack);
  }
  return d;
}

// Uniform points in [0, 1)^2 with random labels at the given attack rate.
inline bsmguard::ml::Dataset uniform_labelled(std::size_t n, double attack_rate, std::uint64_t seed) {
  bsmguard::Rng rng(seed);
  bsmguard::ml::Dataset d(2);
  for (std::size_t i = 0; i < n; ++i) {
    const double x[2] = {rng.uniform(), rng.uniform()};
    d.add(x, rng.uniform() < attack_rate ? bsmguard::Label::attack : bsmguard::Label::no_attack);
  }
  return d;
}

inline double accuracy_of(const auto& model, const bsmguard::ml::Dataset& d) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < d.size(); ++i) hit += model.predict(d.row(i)).label == d.labels[i];
  return static_cast<double>(hit) / static_cast<double>(d.size());
}

}  // namespace testdata
