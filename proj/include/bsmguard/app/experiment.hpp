#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bsmguard/bsm.hpp"
#include "bsmguard/config.hpp"
#include "bsmguard/eval/report.hpp"
#include "bsmguard/ml/grid_search.hpp"
#include "bsmguard/ml/model_io.hpp"

namespace bsmguard::app {

/// `window_s` from the config, default one BSM period.
double aggregation_window(const Config& config);

/// Human-readable detector settings for reports.
std::string describe_detector(const std::string& name, const Config& config);

inline constexpr const char* kDecisionsHeader = "t,vehicle_id,score,attack,warmed_up";

/// Streams BSM CSV records through the aggregator and one detector pipeline per
/// vehicle, writing a decision row per aggregated sample as soon as it closes.
/// Memory is bounded by the number of vehicles. Returns the rows written.
std::size_t detect_stream(std::istream& in, std::ostream& out, const std::string& detector, const Config& config,
                          std::uint64_t seed);

/// Runs a detector over every series and returns attack-oriented scores.
std::vector<eval::ScoredSeries> score_detector(const std::string& detector, const Config& config,
                                               std::span<const VehicleSeries> series, std::uint64_t seed);

/// Wall-clock cost of one observe() call over the concatenated series. The
/// first 100 calls are not counted.
eval::TimingStats time_detector(const std::string& detector, const Config& config,
                                std::span<const VehicleSeries> series, std::uint64_t seed);

eval::EvalReport evaluate_detector(const std::string& detector, const Config& config,
                                   std::span<const VehicleSeries> series, std::uint64_t seed,
                                   const eval::EvaluateOptions& options, bool with_timing);

struct TrainOptions {
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  std::size_t folds = 5;
  double window = kBsmPeriod;
  ml::BalanceOptions balance;
};

/// Reads `train.fraction`, `cv.folds`, `balance` (true/false), `smote.k`, `window_s`.
TrainOptions train_options_from(const Config& config, std::uint64_t seed);

/// All samples of all series as a (speed, accel) dataset, vehicles in order.
ml::Dataset dataset_from_series(std::span<const VehicleSeries> series);

struct TrainOutcome {
  ml::ModelFile file;
  ml::GridSearchResult grid;
  eval::EvalReport report;
};

/// Stratified split, grid search on the training part, refit of the best cell
/// on the whole training part, report on the held-out part.
TrainOutcome train_and_evaluate(const Config& config, std::span<const VehicleSeries> series,
                                const TrainOptions& options);

/// Rebuilds the held-out split recorded in the model file and reports on it.
eval::EvalReport evaluate_model(const ml::ModelFile& file, std::span<const VehicleSeries> series);

}  // namespace bsmguard::app
