#pragma once

// Exhaustive reference implementations for the classifier and ranking code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "bsmguard/ml/dataset.hpp"

namespace oracle {

using bsmguard::Label;

// Sorts every training row by (distance, index) and votes over the first k.
inline std::pair<std::size_t, Label> knn_by_full_sort(const bsmguard::ml::Dataset& train,
                                                      std::span<const double> q, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < train.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) d += (train.row(i)[j] - q[j]) * (train.row(i)[j] - q[j]);
    all.emplace_back(std::sqrt(d), i);
  }
  std::sort(all.begin(), all.end());
  std::size_t attacks = 0;
  for (std::size_t i = 0; i < k; ++i) attacks += train.labels[all[i].second] == Label::attack;
  return {attacks, attacks * 2 > k ? Label::attack : Label::no_attack};
}

inline double gini_unit(double a, double b) {
  const double n = a + b;
  return 1.0 - (a / n) * (a / n) - (b / n) * (b / n);
}

inline double entropy_bits(double a, double b) {
  const double n = a + b;
  double h = 0.0;
  for (double c : {a, b}) {
    if (c > 0.0) h -= (c / n) * std::log2(c / n);
  }
  return h;
}

struct BruteSplit {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = -1.0;
  bool found = false;
};

// Gain of splitting all rows at x[feature] <= threshold, recounting both
// children from scratch. Negative when either child has fewer than min_leaf rows.
inline double split_gain_by_recount(const bsmguard::ml::Dataset& d, std::array<double, 2> w, bool entropy,
                                    std::size_t feature, double threshold, std::size_t min_leaf = 1) {
  auto imp = [&](double a, double b) { return entropy ? entropy_bits(a, b) : gini_unit(a, b); };
  double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
  std::size_t nl = 0, nr = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const bool att = d.labels[i] == Label::attack;
    const double wi = att ? w[1] : w[0];
    if (d.row(i)[feature] <= threshold) {
      (att ? l1 : l0) += wi;
      ++nl;
    } else {
      (att ? r1 : r0) += wi;
      ++nr;
    }
  }
  if (nl < min_leaf || nr < min_leaf) return -1.0;
  const double total = l0 + l1 + r0 + r1;
  return imp(l0 + r0, l1 + r1) - (l0 + l1) / total * imp(l0, l1) - (r0 + r1) / total * imp(r0, r1);
}

// Tries every feature and every midpoint between consecutive distinct values.
inline BruteSplit best_split_by_enumeration(const bsmguard::ml::Dataset& d, std::array<double, 2> w,
                                            bool entropy, std::size_t min_leaf) {
  BruteSplit best;
  for (std::size_t f = 0; f < d.n_features; ++f) {
    std::set<double> values;
    for (std::size_t i = 0; i < d.size(); ++i) values.insert(d.row(i)[f]);
    std::vector<double> v(values.begin(), values.end());
    for (std::size_t t = 0; t + 1 < v.size(); ++t) {
      const double thr = v[t] + (v[t + 1] - v[t]) / 2.0;
      const double gain = split_gain_by_recount(d, w, entropy, f, thr, min_leaf);
      if (gain < 0.0) continue;
      if (!best.found || gain > best.gain) best = {f, thr, gain, true};
    }
  }
  return best;
}

// P(score_pos > score_neg) + P(equal) / 2 over all positive/negative pairs.
inline double auroc_all_pairs(std::span<const double> s, std::span<const Label> y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != Label::attack) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != Label::no_attack) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

}  // namespace oracle
