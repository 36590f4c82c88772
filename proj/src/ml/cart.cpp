#include "bsmguard/ml/cart.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsmguard/error.hpp"

namespace bsmguard::ml {

namespace {

std::array<double, 2> weighted_counts(const Dataset& data, std::span<const std::size_t> rows,
                                      const std::array<double, 2>& weights) {
  std::array<double, 2> w{0.0, 0.0};
  for (std::size_t r : rows) {
    const auto c = static_cast<std::size_t>(to_int(data.labels[r]));
    w[c] += weights[c];
  }
  return w;
}

}  // namespace

const char* to_string(Criterion c) { return c == Criterion::gini ? "gini" : "entropy"; }

Criterion parse_criterion(std::string_view text) {
  if (text == "gini") return Criterion::gini;
  if (text == "entropy") return Criterion::entropy;
  throw ParameterError("unknown split criterion '" + std::string(text) + "'");
}

double impurity(std::span<const double> counts, Criterion criterion, const CostMatrix& costs) {
  if (counts.size() != 2) throw InputError("impurity expects two class counts");
  if (counts[0] < 0.0 || counts[1] < 0.0) throw InputError("impurity: negative class count");
  const double total = counts[0] + counts[1];
  if (!(total > 0.0)) throw InputError("impurity: all class counts are zero");
  const double p0 = counts[0] / total;
  const double p1 = counts[1] / total;
  if (criterion == Criterion::gini) {
    return (costs.no_attack_as_attack + costs.attack_as_no_attack) * p0 * p1;
  }
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return h;
}

std::array<double, 2> class_weights(std::span<const Label> labels, ClassWeighting weighting) {
  if (weighting == ClassWeighting::none) return {1.0, 1.0};
  std::array<std::size_t, 2> n{0, 0};
  for (Label l : labels) ++n[static_cast<std::size_t>(to_int(l))];
  std::array<double, 2> w{1.0, 1.0};
  const auto total = static_cast<double>(labels.size());
  for (std::size_t c = 0; c < 2; ++c) {
    if (n[c] > 0) w[c] = total / (2.0 * static_cast<double>(n[c]));
  }
  return w;
}

std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                         const std::array<double, 2>& weights, const CartParams& params) {
  const auto parent = weighted_counts(data, rows, weights);
  const double parent_total = parent[0] + parent[1];
  if (!(parent_total > 0.0)) return std::nullopt;
  const double parent_impurity = impurity(parent, params.criterion, params.costs);
  const std::size_t n = rows.size();
  const std::size_t min_leaf = std::max<std::size_t>(params.min_leaf, 1);

  std::optional<SplitCandidate> best;
  std::vector<std::size_t> order(rows.begin(), rows.end());
  for (std::size_t f = 0; f < data.n_features; ++f) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return data.row(a)[f] < data.row(b)[f];
    });
    std::array<double, 2> left{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto c = static_cast<std::size_t>(to_int(data.labels[order[i]]));
      left[c] += weights[c];
      const double lo = data.row(order[i])[f];
      const double hi = data.row(order[i + 1])[f];
      if (!(lo < hi)) continue;
      const std::size_t n_left = i + 1;
      if (n_left < min_leaf || n - n_left < min_leaf) continue;
      const std::array<double, 2> right{parent[0] - left[0], parent[1] - left[1]};
      const double w_left = left[0] + left[1];
      const double w_right = right[0] + right[1];
      if (!(w_left > 0.0) || !(w_right > 0.0)) continue;
      const double gain = parent_impurity -
                          (w_left / parent_total) * impurity(left, params.criterion, params.costs) -
                          (w_right / parent_total) * impurity(right, params.criterion, params.costs);
      if (!best || gain > best->gain) {
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        best = SplitCandidate{f, threshold, gain};
      }
    }
  }
  return best;
}

void Cart::fit(const Dataset& data) {
  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  fit(data, rows, class_weights(data.labels, params_.weighting));
}

void Cart::fit(const Dataset& data, std::span<const std::size_t> rows, const std::array<double, 2>& weights) {
  if (rows.empty()) throw InputError("CART: empty training set");
  data.validate();
  n_features_ = data.n_features;
  nodes_.clear();
  grow(data, std::vector<std::size_t>(rows.begin(), rows.end()), 0, weights);
}

std::int32_t Cart::grow(const Dataset& data, std::vector<std::size_t> rows, std::size_t depth,
                        const std::array<double, 2>& weights) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  CartNode node;
  node.depth = depth;
  node.weight = weighted_counts(data, rows, weights);
  for (std::size_t r : rows) ++node.count[static_cast<std::size_t>(to_int(data.labels[r]))];
  const double total = node.weight[0] + node.weight[1];
  if (total > 0.0) {
    node.probability = {node.weight[0] / total, node.weight[1] / total};
    node.impurity = impurity(node.weight, params_.criterion, params_.costs);
  }
  nodes_.push_back(node);

  const bool pure = node.count[0] == 0 || node.count[1] == 0;
  if (pure || depth >= params_.max_depth || rows.size() < params_.min_split) return id;
  const auto split = best_split(data, rows, weights, params_);
  if (!split) return id;

  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (std::size_t r : rows) (data.row(r)[split->feature] <= split->threshold ? left : right).push_back(r);
  rows.clear();
  rows.shrink_to_fit();

  const auto l = grow(data, std::move(left), depth + 1, weights);
  const auto r = grow(data, std::move(right), depth + 1, weights);
  auto& n = nodes_[static_cast<std::size_t>(id)];
  n.feature = static_cast<int>(split->feature);
  n.threshold = split->threshold;
  n.gain = split->gain;
  n.left = l;
  n.right = r;
  return id;
}

Prediction Cart::predict(std::span<const double> x) const {
  if (nodes_.empty()) throw InputError("CART: model is not fitted");
  if (x.size() != n_features_) throw InputError("CART: query has the wrong number of features");
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  const double p = nodes_[i].probability[1];
  return Prediction{p > 0.5 ? Label::attack : Label::no_attack, p};
}

std::size_t Cart::depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

Cart Cart::from_nodes(CartParams params, std::size_t n_features, std::vector<CartNode> nodes) {
  if (nodes.empty()) throw InputError("tree has no nodes");
  const auto size = static_cast<std::int32_t>(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) continue;
    if (static_cast<std::size_t>(n.feature) >= n_features) throw InputError("tree node has a bad feature index");
    // Children are always stored after their parent, which also rules out cycles.
    const auto self = static_cast<std::int32_t>(i);
    if (n.left <= self || n.right <= self || n.left >= size || n.right >= size) {
      throw InputError("tree node has a bad child index");
    }
  }
  Cart tree(params);
  tree.n_features_ = n_features;
  tree.nodes_ = std::move(nodes);
  return tree;
}

}  // namespace bsmguard::ml
