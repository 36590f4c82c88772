#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bsmguard/config.hpp"
#include "bsmguard/ml/dataset.hpp"
#include "bsmguard/ml/model.hpp"

namespace bsmguard::ml {

struct GridSearchOptions {
  std::size_t folds = 5;
  BalanceOptions balance;
  std::uint64_t seed = 0;
};

struct GridCell {
  ModelSpec spec;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

struct GridSearchResult {
  std::vector<GridCell> cells;  // grid enumeration order
  std::size_t best = 0;         // first cell with the highest mean accuracy
};

/// Trains on every row of `train` outside `validation`; the validation rows,
/// labels included, are never read.
TrainedModel fit_fold(const ModelSpec& spec, const Dataset& train, std::span<const std::size_t> validation,
                      const BalanceOptions& balance, std::uint64_t seed);

/// Stratified k-fold cross-validation of every grid cell on `train`. Each fold
/// standardizes, balances and fits on its training part only; validation
/// labels are read solely for scoring. Fold assignment is shared by all cells.
GridSearchResult grid_search(const std::vector<ModelSpec>& grid, const Dataset& train,
                             const GridSearchOptions& options);

/// Builds the grid for `model.family` from `grid.<param>` list keys; any
/// parameter without a list keeps its default. The cartesian product is
/// enumerated with the last-listed parameter varying fastest.
///
///   knn:    grid.k
///   cart:   grid.criterion, grid.max_depth, grid.min_split, grid.min_leaf
///   forest: grid.n_trees, grid.criterion, grid.max_depth, grid.min_split, grid.min_leaf
///   nn:     grid.hidden, grid.learning_rate, grid.epochs, grid.batch
std::vector<ModelSpec> grid_from_config(const Config& config);

}  // namespace bsmguard::ml
