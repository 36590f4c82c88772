#include "bsmguard/app/experiment.hpp"

#include <istream>
#include <ostream>
#include <unordered_map>

#include "bsmguard/csv.hpp"
#include "bsmguard/detectors/factory.hpp"
#include "bsmguard/error.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::app {

namespace {

detectors::DetectorPipeline make_pipeline(const std::string& detector, const Config& config, std::uint64_t seed,
                                          std::size_t vehicle_index) {
  return detectors::DetectorPipeline(
      detectors::make_detector(detector, config, derive_seed(seed, "detector." + detector, vehicle_index)),
      detectors::input_channel_from(detector, config));
}

void write_decision(std::ostream& out, const VehicleSample& s, const detectors::DetectorDecision& d) {
  out << format_double(s.sample.t) << ',' << s.vehicle_id << ',' << format_double(d.score) << ','
      << (d.attack ? 1 : 0) << ',' << (d.warmed_up ? 1 : 0) << '\n';
}

eval::EvalReport model_report(const ml::ModelFile& file, const ml::Dataset& data,
                              std::span<const std::size_t> test_rows) {
  eval::ScoredSeries test;
  test.vehicle_id = "test-split";
  for (std::size_t i : test_rows) {
    const auto p = file.model.predict(data.row(i));
    test.samples.push_back({0.0, data.labels[i], is_attack(p.label), p.score, true});
  }
  eval::EvaluateOptions options;
  options.latency = false;
  const eval::ScoredSeries all[] = {std::move(test)};
  return eval::evaluate_series("model", std::string(ml::to_string(file.model.spec.family)),
                               ml::describe(file.model.spec), all, options);
}

}  // namespace

double aggregation_window(const Config& config) {
  const double w = config.get_double("window_s", kBsmPeriod);
  if (!(w > 0.0)) config.fail("window_s", "must be positive");
  return w;
}

std::string describe_detector(const std::string& name, const Config& config) {
  const auto input = std::string(detectors::to_string(detectors::input_channel_from(name, config)));
  if (name == "bocpd") {
    const auto c = detectors::bocpd_config_from(config);
    return "lambda=" + format_double(c.lambda) + " mu0=" + format_double(c.mu0) + " kappa=" + format_double(c.kappa) +
           " alpha=" + format_double(c.alpha) + " beta=" + format_double(c.beta) +
           " threshold=" + format_double(c.threshold) + " warmup=" + std::to_string(c.warmup) + " input=" + input;
  }
  if (name == "em") {
    const auto c = detectors::em_config_from(config, 0);
    return "threshold=" + format_double(c.threshold) + " seed_size=" + std::to_string(c.seed_size) +
           " attack_mean=" + format_double(c.attack_mean) + " attack_sigma=" + format_double(c.attack_sigma) +
           " pi=" + format_double(c.initial_attack_weight) + " input=" + input;
  }
  if (name == "cusum") {
    const auto c = detectors::cusum_config_from(config);
    return std::string("rule=") + (c.rule == detectors::CusumRule::adaptive ? "adaptive" : "tabular") +
           " delta=" + format_double(c.delta) + " alpha=" + format_double(c.alpha) +
           " h_sigma=" + format_double(c.h_sigma) + " warmup=" + std::to_string(c.warmup) + " input=" + input;
  }
  throw ConfigError("unknown detector '" + name + "' (expected bocpd, em or cusum)");
}

std::size_t detect_stream(std::istream& in, std::ostream& out, const std::string& detector, const Config& config,
                          std::uint64_t seed) {
  // Validate the detector settings before reading any data.
  detectors::make_detector(detector, config, seed);
  detectors::input_channel_from(detector, config);

  BsmCsvReader reader(in);
  StreamAggregator aggregator(aggregation_window(config));
  std::unordered_map<std::string, detectors::DetectorPipeline> pipelines;
  std::size_t rows = 0;

  auto emit = [&](const VehicleSample& s) {
    auto it = pipelines.find(s.vehicle_id);
    if (it == pipelines.end()) {
      it = pipelines.emplace(s.vehicle_id, make_pipeline(detector, config, seed, pipelines.size())).first;
    }
    write_decision(out, s, it->second.step(s.sample));
    ++rows;
  };

  out << kDecisionsHeader << '\n';
  while (auto record = reader.next()) {
    try {
      if (auto s = aggregator.push(*record)) emit(*s);
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(reader.line()) + ": " + e.what());
    }
  }
  for (const auto& s : aggregator.flush()) emit(s);
  if (!out) throw Error("failed writing decisions");
  return rows;
}

std::vector<eval::ScoredSeries> score_detector(const std::string& detector, const Config& config,
                                               std::span<const VehicleSeries> series, std::uint64_t seed) {
  std::vector<eval::ScoredSeries> out;
  out.reserve(series.size());
  for (std::size_t v = 0; v < series.size(); ++v) {
    auto pipeline = make_pipeline(detector, config, seed, v);
    const double orientation = pipeline.detector().higher_score_is_attack() ? 1.0 : -1.0;
    eval::ScoredSeries scored;
    scored.vehicle_id = series[v].vehicle_id;
    scored.samples.reserve(series[v].samples.size());
    for (const auto& s : series[v].samples) {
      const auto d = pipeline.step(s);
      scored.samples.push_back({s.t, s.label, d.attack, orientation * d.score, d.warmed_up});
    }
    out.push_back(std::move(scored));
  }
  return out;
}

eval::TimingStats time_detector(const std::string& detector, const Config& config,
                                std::span<const VehicleSeries> series, std::uint64_t seed) {
  std::vector<detectors::DetectorPipeline> pipelines;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t v = 0; v < series.size(); ++v) {
    pipelines.push_back(make_pipeline(detector, config, seed, v));
    for (std::size_t i = 0; i < series[v].samples.size(); ++i) order.emplace_back(v, i);
  }
  return eval::time_inference(
      [&](std::size_t k) {
        const auto [v, i] = order[k];
        pipelines[v].step(series[v].samples[i]);
      },
      order.size());
}

eval::EvalReport evaluate_detector(const std::string& detector, const Config& config,
                                   std::span<const VehicleSeries> series, std::uint64_t seed,
                                   const eval::EvaluateOptions& options, bool with_timing) {
  const auto scored = score_detector(detector, config, series, seed);
  auto report = eval::evaluate_series("detector", detector, describe_detector(detector, config), scored, options);
  if (with_timing) report.timing = time_detector(detector, config, series, seed);
  return report;
}

TrainOptions train_options_from(const Config& config, std::uint64_t seed) {
  TrainOptions o;
  o.seed = seed;
  o.train_fraction = config.get_double("train.fraction", o.train_fraction);
  if (!(o.train_fraction > 0.0 && o.train_fraction < 1.0)) config.fail("train.fraction", "must lie in (0, 1)");
  o.folds = config.get_size("cv.folds", o.folds);
  if (o.folds < 2) config.fail("cv.folds", "must be at least 2");
  o.window = aggregation_window(config);
  if (auto b = config.get_string("balance")) {
    if (*b == "true") {
      o.balance.enabled = true;
    } else if (*b == "false") {
      o.balance.enabled = false;
    } else {
      config.fail("balance", "expected true or false");
    }
  }
  o.balance.smote_k = config.get_size("smote.k", o.balance.smote_k);
  if (o.balance.smote_k == 0) config.fail("smote.k", "must be at least 1");
  return o;
}

ml::Dataset dataset_from_series(std::span<const VehicleSeries> series) {
  ml::Dataset data(2);
  for (const auto& s : series) {
    for (const auto& x : s.samples) {
      const double row[2] = {x.avg_speed, x.avg_accel};
      data.add(row, x.label);
    }
  }
  return data;
}

TrainOutcome train_and_evaluate(const Config& config, std::span<const VehicleSeries> series,
                                const TrainOptions& options) {
  const auto grid = ml::grid_from_config(config);
  const ml::Dataset data = dataset_from_series(series);
  const auto counts = data.class_counts();
  if (counts[0] == 0 || counts[1] == 0) throw ConfigError("training data must contain both classes");

  const auto split = ml::stratified_split(data.labels, options.train_fraction, derive_seed(options.seed, "split"));
  const ml::Dataset train = data.subset(split.train);

  ml::GridSearchOptions search;
  search.folds = options.folds;
  search.balance = options.balance;
  search.seed = derive_seed(options.seed, "grid");
  TrainOutcome outcome;
  try {
    outcome.grid = ml::grid_search(grid, train, search);
  } catch (const InputError& e) {
    throw ConfigError(std::string("grid search is infeasible: ") + e.what());
  }

  const auto& best = outcome.grid.cells[outcome.grid.best];
  outcome.file.model = ml::train_model(best.spec, train, options.balance, derive_seed(options.seed, "final"));
  outcome.file.training.seed = options.seed;
  outcome.file.training.train_fraction = options.train_fraction;
  outcome.file.training.window = options.window;
  outcome.file.training.folds = options.folds;
  outcome.file.training.cv_accuracy = best.mean_accuracy;
  outcome.report = model_report(outcome.file, data, split.test);
  return outcome;
}

eval::EvalReport evaluate_model(const ml::ModelFile& file, std::span<const VehicleSeries> series) {
  const ml::Dataset data = dataset_from_series(series);
  if (data.n_features != file.model.standardizer.features()) {
    throw InputError("model expects " + std::to_string(file.model.standardizer.features()) + " features");
  }
  const auto split =
      ml::stratified_split(data.labels, file.training.train_fraction, derive_seed(file.training.seed, "split"));
  return model_report(file, data, split.test);
}

}  // namespace bsmguard::app
