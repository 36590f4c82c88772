#include "bsmguard/ml/grid_search.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "bsmguard/error.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::ml {

TrainedModel fit_fold(const ModelSpec& spec, const Dataset& train, std::span<const std::size_t> validation,
                      const BalanceOptions& balance, std::uint64_t seed) {
  return train_model(spec, train.subset(complement(train.size(), validation)), balance, seed);
}

GridSearchResult grid_search(const std::vector<ModelSpec>& grid, const Dataset& train,
                             const GridSearchOptions& options) {
  if (grid.empty()) throw ParameterError("grid search: empty grid");
  if (options.folds < 2) throw ParameterError("grid search: need at least 2 folds");
  train.validate();
  const auto counts = train.class_counts();
  if (counts[0] == 0 || counts[1] == 0) throw InputError("grid search: training data has a single class");
  const auto folds = stratified_folds(train.labels, options.folds, derive_seed(options.seed, "cv.folds"));

  GridSearchResult result;
  result.cells.reserve(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    GridCell cell;
    cell.spec = grid[c];
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const TrainedModel model =
          fit_fold(grid[c], train, folds[f], options.balance, derive_seed(options.seed, "cv.fold", f));
      std::size_t correct = 0;
      for (std::size_t i : folds[f]) correct += model.predict(train.row(i)).label == train.labels[i];
      cell.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(folds[f].size()));
    }
    double sum = 0.0;
    for (double a : cell.fold_accuracy) sum += a;
    cell.mean_accuracy = sum / static_cast<double>(cell.fold_accuracy.size());
    result.cells.push_back(std::move(cell));
  }
  for (std::size_t c = 1; c < result.cells.size(); ++c) {
    if (result.cells[c].mean_accuracy > result.cells[result.best].mean_accuracy) result.best = c;
  }
  return result;
}

namespace {

// One grid axis: how many values it has and how to apply value i to a spec.
struct Axis {
  std::size_t size;
  std::function<void(ModelSpec&, std::size_t)> apply;
};

std::vector<std::size_t> size_list(const Config& config, const std::string& key, std::size_t lo) {
  std::vector<std::size_t> out;
  for (double v : config.get_double_list(key, {})) {
    if (!(v >= static_cast<double>(lo)) || v != std::floor(v)) {
      config.fail(key, "expected integers >= " + std::to_string(lo));
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void add_size_axis(std::vector<Axis>& axes, const Config& config, const std::string& name, std::size_t lo,
                   std::function<std::size_t&(ModelSpec&)> field) {
  auto values = size_list(config, "grid." + name, lo);
  if (values.empty()) return;
  axes.push_back({values.size(), [values, field](ModelSpec& s, std::size_t i) { field(s) = values[i]; }});
}

void add_criterion_axis(std::vector<Axis>& axes, const Config& config,
                        std::function<Criterion&(ModelSpec&)> field) {
  std::vector<Criterion> values;
  for (const auto& v : config.get_string_list("grid.criterion", {})) {
    try {
      values.push_back(parse_criterion(v));
    } catch (const ParameterError& e) {
      config.fail("grid.criterion", e.what());
    }
  }
  if (values.empty()) return;
  axes.push_back({values.size(), [values, field](ModelSpec& s, std::size_t i) { field(s) = values[i]; }});
}

void add_tree_axes(std::vector<Axis>& axes, const Config& config, std::function<CartParams&(ModelSpec&)> tree) {
  add_criterion_axis(axes, config, [tree](ModelSpec& s) -> Criterion& { return tree(s).criterion; });
  add_size_axis(axes, config, "max_depth", 0, [tree](ModelSpec& s) -> std::size_t& { return tree(s).max_depth; });
  add_size_axis(axes, config, "min_split", 2, [tree](ModelSpec& s) -> std::size_t& { return tree(s).min_split; });
  add_size_axis(axes, config, "min_leaf", 1, [tree](ModelSpec& s) -> std::size_t& { return tree(s).min_leaf; });
}

}  // namespace

std::vector<ModelSpec> grid_from_config(const Config& config) {
  ModelFamily family = ModelFamily::cart;
  if (auto name = config.get_string("model.family")) {
    try {
      family = parse_model_family(*name);
    } catch (const ConfigError& e) {
      config.fail("model.family", e.what());
    }
  }
  ModelSpec base = default_spec(family);
  base.forest.threads = config.get_size("forest.threads", base.forest.threads);
  base.knn.k = config.get_size("knn.k", base.knn.k);

  std::vector<Axis> axes;
  switch (family) {
    case ModelFamily::knn:
      add_size_axis(axes, config, "k", 1, [](ModelSpec& s) -> std::size_t& { return s.knn.k; });
      break;
    case ModelFamily::cart:
      add_tree_axes(axes, config, [](ModelSpec& s) -> CartParams& { return s.cart; });
      break;
    case ModelFamily::forest:
      add_size_axis(axes, config, "n_trees", 1, [](ModelSpec& s) -> std::size_t& { return s.forest.n_trees; });
      add_tree_axes(axes, config, [](ModelSpec& s) -> CartParams& { return s.forest.tree; });
      break;
    case ModelFamily::nn: {
      add_size_axis(axes, config, "hidden", 1, [](ModelSpec& s) -> std::size_t& { return s.nn.hidden; });
      const auto rates = config.get_double_list("grid.learning_rate", {});
      for (double r : rates) {
        if (!(r > 0.0)) config.fail("grid.learning_rate", "learning rates must be positive");
      }
      if (!rates.empty()) {
        axes.push_back({rates.size(), [rates](ModelSpec& s, std::size_t i) { s.nn.learning_rate = rates[i]; }});
      }
      add_size_axis(axes, config, "epochs", 1, [](ModelSpec& s) -> std::size_t& { return s.nn.epochs; });
      add_size_axis(axes, config, "batch", 1, [](ModelSpec& s) -> std::size_t& { return s.nn.batch; });
      break;
    }
  }

  std::vector<ModelSpec> grid{base};
  for (const auto& axis : axes) {
    std::vector<ModelSpec> next;
    next.reserve(grid.size() * axis.size);
    for (const auto& spec : grid) {
      for (std::size_t i = 0; i < axis.size; ++i) {
        next.push_back(spec);
        axis.apply(next.back(), i);
      }
    }
    grid = std::move(next);
  }
  return grid;
}

}  // namespace bsmguard::ml
