#include "bsmguard/ml/smote.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "bsmguard/error.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::ml {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    d += diff * diff;
  }
  return d;
}

// k nearest rows of `pool` to pool[self], excluding self.
std::vector<std::size_t> nearest_within(const Dataset& data, const std::vector<std::size_t>& pool,
                                        std::size_t self, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(pool.size() - 1);
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (j == self) continue;
    cand.emplace_back(squared_distance(data.row(pool[self]), data.row(pool[j])), pool[j]);
  }
  const auto kk = std::min(k, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kk), cand.end());
  std::vector<std::size_t> out;
  out.reserve(kk);
  for (std::size_t i = 0; i < kk; ++i) out.push_back(cand[i].second);
  return out;
}

}  // namespace

Dataset smote_balance(const Dataset& data, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw ParameterError("SMOTE needs k >= 1");
  const auto counts = data.class_counts();
  if (counts[0] == 0 || counts[1] == 0) throw InputError("SMOTE needs both classes present");
  const std::size_t minority_class = counts[1] < counts[0] ? 1 : 0;
  const std::size_t n_min = counts[minority_class];
  const std::size_t n_maj = counts[1 - minority_class];
  if (n_maj - n_min <= 1) return data;
  if (n_min < 2) throw InputError("SMOTE needs at least 2 minority rows");

  std::vector<std::size_t> minority;
  std::vector<std::size_t> majority;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (static_cast<std::size_t>(to_int(data.labels[i])) == minority_class ? minority : majority).push_back(i);
  }

  const std::size_t target = (n_min + n_maj) / 2;
  Rng rng(seed);

  // Majority rows to keep: a random subset of size `target`, restored to input order.
  std::vector<std::size_t> keep = majority;
  for (std::size_t i = 0; i < target; ++i) std::swap(keep[i], keep[i + rng.index(keep.size() - i)]);
  keep.resize(target);
  std::vector<bool> kept(data.size(), true);
  for (std::size_t i : majority) kept[i] = false;
  for (std::size_t i : keep) kept[i] = true;

  Dataset out(data.n_features);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (kept[i]) out.add(data.row(i), data.labels[i]);
  }

  std::vector<std::vector<std::size_t>> neighbours(minority.size());
  const Label minority_label = minority_class == 1 ? Label::attack : Label::no_attack;
  std::vector<double> point(data.n_features);
  for (std::size_t s = n_min; s < target; ++s) {
    const std::size_t base = rng.index(minority.size());
    if (neighbours[base].empty()) neighbours[base] = nearest_within(data, minority, base, k);
    const auto& nb = neighbours[base];
    const std::size_t other = nb[rng.index(nb.size())];
    const double gap = rng.uniform();
    const auto x = data.row(minority[base]);
    const auto y = data.row(other);
    for (std::size_t j = 0; j < data.n_features; ++j) point[j] = x[j] + gap * (y[j] - x[j]);
    out.add(point, minority_label);
  }
  return out;
}

}  // namespace bsmguard::ml
