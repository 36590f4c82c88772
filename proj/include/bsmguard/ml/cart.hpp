#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bsmguard/ml/dataset.hpp"

namespace bsmguard::ml {

enum class Criterion { gini, entropy };

const char* to_string(Criterion c);
Criterion parse_criterion(std::string_view text);

/// Misclassification costs eps(c1|c2) for the Gini index. Unit costs give the
/// usual 1 - sum p^2.
struct CostMatrix {
  double no_attack_as_attack = 1.0;
  double attack_as_no_attack = 1.0;
};

/// Node impurity from (weighted) class counts {no_attack, attack}.
/// gini    = sum_{c1 != c2} eps(c1|c2) p(c1) p(c2)
/// entropy = -sum p log2 p
/// Throws InputError when the counts are negative or all zero.
double impurity(std::span<const double> counts, Criterion criterion, const CostMatrix& costs = {});

enum class ClassWeighting {
  none,      // every row weighs 1
  balanced,  // n / (2 n_c), inversely proportional to class frequency
};

struct CartParams {
  Criterion criterion = Criterion::entropy;
  std::size_t max_depth = 8;
  std::size_t min_split = 2;  // fewest rows a node needs before it may split
  std::size_t min_leaf = 1;   // fewest rows allowed in either child
  ClassWeighting weighting = ClassWeighting::balanced;
  CostMatrix costs;
};

/// Per-class weights for a labelled set.
std::array<double, 2> class_weights(std::span<const Label> labels, ClassWeighting weighting);

struct CartNode {
  int feature = -1;         // -1 for a leaf
  double threshold = 0.0;   // rows with x[feature] <= threshold go left
  double impurity = 0.0;
  double gain = 0.0;        // impurity decrease of the chosen split
  std::array<double, 2> weight{0.0, 0.0};   // weighted class counts
  std::array<std::size_t, 2> count{0, 0};   // raw class counts
  std::array<double, 2> probability{0.5, 0.5};
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::size_t depth = 0;

  bool is_leaf() const { return feature < 0; }
};

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

/// Best axis-aligned split of the rows `rows` (repeats allowed) under the given
/// class weights. Thresholds are midpoints of consecutive distinct values; the
/// first best by (feature, threshold) order wins. nullopt when no threshold
/// leaves at least min_leaf rows on both sides.
std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                         const std::array<double, 2>& weights, const CartParams& params);

class Cart {
 public:
  Cart() = default;
  explicit Cart(CartParams params) : params_(params) {}

  void fit(const Dataset& data);
  /// Fits on the given rows of `data` (a bootstrap sample may repeat rows).
  void fit(const Dataset& data, std::span<const std::size_t> rows, const std::array<double, 2>& weights);

  Prediction predict(std::span<const double> x) const;

  const CartParams& params() const { return params_; }
  const std::vector<CartNode>& nodes() const { return nodes_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t depth() const;

  /// Rebuilds a tree from serialized nodes; throws InputError when they do not
  /// form a valid tree.
  static Cart from_nodes(CartParams params, std::size_t n_features, std::vector<CartNode> nodes);

 private:
  std::int32_t grow(const Dataset& data, std::vector<std::size_t> rows, std::size_t depth,
                    const std::array<double, 2>& weights);

  CartParams params_;
  std::size_t n_features_ = 0;
  std::vector<CartNode> nodes_;
};

}  // namespace bsmguard::ml
